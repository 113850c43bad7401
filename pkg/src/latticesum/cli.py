"""Command-line front end.

Two subcommands:

* ``eval`` computes one of the sums/integrals/expansions (fn, gn, hn, un,
  in, expansion, graph) for a lattice spec or a raw quadratic form and
  prints the result as JSON (default) or CSV.  ``--n`` accepts a
  comma-separated list, which turns the call into a sweep; sweep rows are
  ordered by n no matter how they were scheduled.
* ``certify`` runs one of the named error-order claims over a geometric
  ladder of n and emits the residual report; exit status 0 means the
  fitted order matched the claim, 1 means it did not.

Data goes to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 failed certification, 2 invalid arguments, 3 computation error.  Floats
are printed with repr, the shortest round-trip decimal.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict

from . import asymptotics, graph, quadrature, sums
from .errors import LatticeSumError
from .lattice import DEFAULT_BETA, LatticeSpec, QuadraticForm, load_spec

CLAIMS = ("thm2-m1", "thm2-m2", "thm3", "thm4", "thm5-even")

#: claim -> (residual model, ladder parity rule)
_CLAIM_MODEL = {
    "thm2-m1": ("log_n", None),
    "thm2-m2": ("const", None),
    "thm3": ("logn_over_n4", None),
    "thm4": ("logn_over_n2", "keep"),
    "thm5-even": ("inv_n2", "even"),
}


def _worker_count() -> int:
    raw = os.environ.get("LATTICE_SUM_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _parse_form(text: str) -> QuadraticForm:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError("--form expects a,b,c")
    return QuadraticForm(*parts)


def _parse_ns(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p.strip()]


def _ladder(nmin: int, nmax: int, parity: str | None) -> list[int]:
    """Geometric ladder from nmin to nmax (roughly doubling).

    parity "keep" doubles with n -> 2n-1 for odd starts (parity-preserving);
    "even" forces even rungs.  nmax is always included as the final rung.
    """
    n = nmin
    if parity == "even" and n % 2 == 1:
        n += 1
    ns = []
    while n <= nmax:
        ns.append(n)
        if parity == "keep" and n % 2 == 1:
            n = 2 * n - 1
        else:
            n = 2 * n
    if not ns:
        raise ValueError("empty ladder; check --nmin/--nmax")
    if ns[-1] != nmax:
        ns.append(nmax)
    return ns


def _emit(args, payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
        return
    rows = payload if isinstance(payload, list) else [payload]
    fields = list(rows[0].keys())
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row.values()])


def _result_row(r: sums.SumResult) -> dict:
    return {
        "n": r.n,
        "value": r.value,
        "method": r.method,
        "err_estimate": r.err_estimate,
    }


def _spec_or_fail(args) -> LatticeSpec:
    if not args.spec:
        raise ValueError("this evaluation needs --spec")
    return load_spec(args.spec)


def _form_from_args(args) -> QuadraticForm:
    if args.form:
        return _parse_form(args.form)
    if args.spec:
        return load_spec(args.spec).form
    raise ValueError("need --form a,b,c (or --spec to derive the form)")


def _eval_single(args, n: int) -> sums.SumResult:
    kind = args.kind
    if kind == "fn":
        spec = _spec_or_fail(args)
        if args.method == "expansion":
            return asymptotics.composite_fn_estimate(spec, n, tol=args.tol)
        return sums.fn_direct(spec, n, m=args.m, beta=args.beta)
    if kind == "gn":
        form = _form_from_args(args)
        if args.method == "digamma":
            return sums.gn_digamma(form, n)
        if args.method == "expansion":
            e = asymptotics.gn_expansion(form)
            return sums.SumResult(e.evaluate(n), n, "expansion", 0, 0.0)
        return sums.gn_direct(form, n)
    if kind == "hn":
        if args.method == "expansion":
            return sums.SumResult(
                asymptotics.hn_expansion().evaluate(n), n, "expansion", 0, 0.0
            )
        return sums.SumResult(sums.hn_direct(n), n, "direct", max(0, n - 1), 0.0)
    if kind == "un":
        form = _form_from_args(args)
        if args.method == "expansion":
            e = asymptotics.un_expansion(form)
            return sums.SumResult(e.evaluate(n), n, "expansion", 0, 0.0)
        return sums.SumResult(sums.un_direct(form, n), n, "direct", 4 * n, 0.0)
    if kind == "in":
        spec = _spec_or_fail(args)
        if args.m is None:
            return quadrature.in_f_numeric(spec, n, tol=args.tol)
        if args.method == "closed":
            if args.m != 1:
                raise ValueError("closed form exists only for m=1")
            return quadrature.in_f1_closed(spec, n)
        if args.method == "expansion":
            if args.m != 1:
                raise ValueError("expansion exists only for m=1")
            e = asymptotics.in_f1_expansion(spec)
            return sums.SumResult(e.evaluate(n), n, "expansion", 0, 0.0)
        return quadrature.in_fm_numeric(spec, n, args.m, args.beta, tol=args.tol)
    raise ValueError(f"unknown eval kind {kind!r}")


def _cmd_eval(args) -> int:
    ns = _parse_ns(args.n) if args.n else []
    if args.kind == "expansion":
        payload = _expansion_payload(args)
        _emit(args, payload)
        return 0
    if args.kind == "graph":
        spec = _spec_or_fail(args)
        rows = []
        for n in ns:
            g = graph.TorusGraph(spec, n)
            trace = graph.trace_pseudoinverse_spectral(g)
            tau, kf = graph.tau_and_kirchhoff(g)
            rows.append(
                {
                    "n": n,
                    "trace_pseudoinverse": trace,
                    "tau": tau,
                    "kirchhoff": kf,
                    "vertices": g.vertex_count,
                    "degree": g.degree,
                }
            )
        _emit(args, rows if len(rows) > 1 else rows[0])
        return 0
    if not ns:
        raise ValueError("--n is required")
    if len(ns) == 1:
        _emit(args, _result_row(_eval_single(args, ns[0])))
        return 0
    workers = _worker_count()
    ordered = sorted(ns)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda n: _eval_single(args, n), ordered))
    else:
        results = [_eval_single(args, n) for n in ordered]
    _emit(args, [_result_row(r) for r in results])
    return 0


def _expansion_payload(args) -> dict:
    target = args.target
    if not target:
        raise ValueError("eval expansion needs --target")
    if target == "leading":
        spec = _spec_or_fail(args)
        return {"target": "leading", "value": asymptotics.leading_term(spec)}
    if target == "fn_f1":
        record = asymptotics.fn_f1_expansion(_spec_or_fail(args))
    elif target == "in_f1":
        record = asymptotics.in_f1_expansion(_spec_or_fail(args))
    elif target == "gn":
        record = asymptotics.gn_expansion(_form_from_args(args))
    elif target == "hn":
        record = asymptotics.hn_expansion()
    elif target == "un":
        record = asymptotics.un_expansion(_form_from_args(args))
    else:
        raise ValueError(f"unknown expansion target {target!r}")
    payload = {"target": target}
    payload.update(asdict(record))
    return payload


def _certify_residual(args, claim: str, n: int) -> float:
    if claim == "thm3":
        form = _form_from_args(args)
        return sums.gn_direct(form, n).value - asymptotics.gn_expansion(form).evaluate(n)
    if claim == "thm4":
        spec = _spec_or_fail(args)
        record = asymptotics.fn_f1_expansion(spec)
        return sums.fn_direct(spec, n, m=1).value - record.evaluate(n)
    if claim == "thm5-even":
        spec = _spec_or_fail(args)
        record = asymptotics.in_f1_expansion(spec)
        return quadrature.in_f1_closed(spec, n).value - record.evaluate(n)
    if claim in ("thm2-m1", "thm2-m2"):
        spec = _spec_or_fail(args)
        m = 1 if claim.endswith("m1") else 2
        beta = args.beta if args.beta is not None else DEFAULT_BETA
        return asymptotics.theorem2_combination(spec, n, m, beta, tol=args.tol)
    raise ValueError(f"unknown claim {claim!r}")


def _cmd_certify(args) -> int:
    model, parity = _CLAIM_MODEL[args.claim]
    ns = _ladder(args.nmin, args.nmax, parity)
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            residuals = list(pool.map(lambda n: _certify_residual(args, args.claim, n), ns))
    else:
        residuals = [_certify_residual(args, args.claim, n) for n in ns]
    report = asymptotics.residual_order_fit(list(zip(ns, residuals)), model)
    payload = {
        "claim": args.claim,
        "model": report.model,
        "samples": [[n, r] for n, r in report.samples],
        "fitted_exponent": report.fitted_exponent,
        "fitted_log_power": report.fitted_log_power,
        "amplitude": report.amplitude,
        "passed": report.passed,
    }
    print(json.dumps(payload, indent=2))
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticesum",
        description="Planar lattice sums, integrals, and asymptotic expansions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a sum, integral, or expansion")
    ev.add_argument(
        "kind", choices=["fn", "gn", "hn", "un", "in", "expansion", "graph"]
    )
    ev.add_argument("--spec", help="bundled name (square|triangular|unionjack) or JSON path")
    ev.add_argument("--form", help="quadratic form coefficients a,b,c")
    ev.add_argument("--n", help="n value, or comma-separated list for a sweep")
    ev.add_argument("--m", type=int, default=None, help="Taylor order for f_m")
    ev.add_argument("--beta", type=float, default=None, help="domain restriction in (0,1)")
    ev.add_argument(
        "--method",
        choices=["direct", "digamma", "quadrature", "expansion", "closed"],
        default="direct",
    )
    ev.add_argument("--tol", type=float, default=1e-9, help="quadrature relative tolerance")
    ev.add_argument("--target", help="expansion target: fn_f1|gn|in_f1|hn|un|leading")
    ev.add_argument("--format", choices=["json", "csv"], default="json")
    ev.set_defaults(func=_cmd_eval)

    ce = sub.add_parser("certify", help="certify a claimed error order empirically")
    ce.add_argument("--claim", choices=list(CLAIMS), required=True)
    ce.add_argument("--spec", help="lattice spec name or JSON path")
    ce.add_argument("--form", help="quadratic form a,b,c (thm3)")
    ce.add_argument("--nmin", type=int, required=True)
    ce.add_argument("--nmax", type=int, required=True)
    ce.add_argument("--beta", type=float, default=None)
    ce.add_argument("--tol", type=float, default=1e-9)
    ce.add_argument("--format", choices=["json"], default="json")
    ce.set_defaults(func=_cmd_certify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LatticeSumError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
