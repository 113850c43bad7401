"""Adaptive 2-D quadrature for the lattice integrals.

The integrands behave like 1/||x||^2 near the excluded square around the
origin, so panels are refined where it matters: tensor Gauss-Legendre
7-point panels are split by recursive quadrisection, with the local error
taken from an embedded 3-point rule, and panels touching the excluded
square are pre-subdivided to depth 4 before error-driven refinement
starts.  The final value sums panel contributions in creation order, which
keeps results deterministic however the refinement queue is processed.

Closed forms are used where they exist: for the quadratic-form integral
I_n(f_1) the polar factorization gives the odd-n value exactly and reduces
the even-n case to the exact part plus a small corner-box integral.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ToleranceNotMet
from .lattice import (
    PSI_FLOOR,
    LatticeSpec,
    beta_index_limit,
    pm_values,
    psi_values,
)
from .sums import SumResult, neumaier_sum

DEFAULT_BUDGET = 10_000_000

_NODES7, _WEIGHTS7 = np.polynomial.legendre.leggauss(7)
_NODES3, _WEIGHTS3 = np.polynomial.legendre.leggauss(3)

# Evaluations per panel: 7x7 main rule plus 3x3 embedded rule.
_EVALS_PER_PANEL = 49 + 9


def midpoint_error_bound(delta1: float, delta2: float,
                         max_d2_1: float, max_d2_2: float) -> float:
    """Midpoint-rule cell error bound (delta1^2 M1 + delta2^2 M2) / 24."""
    if min(delta1, delta2, max_d2_1, max_d2_2) < 0:
        raise ValueError("midpoint_error_bound needs nonnegative inputs")
    return (delta1 * delta1 * max_d2_1 + delta2 * delta2 * max_d2_2) / 24.0


@dataclass
class _Panel:
    x0: float
    x1: float
    y0: float
    y1: float
    depth: int
    index: int
    value: float = 0.0
    err: float = 0.0


def _evaluate_panels(func, panels: list[_Panel]) -> None:
    """Fill value/err on each panel from the 7x7 and 3x3 tensor rules."""
    P = len(panels)
    x0 = np.array([p.x0 for p in panels])
    x1 = np.array([p.x1 for p in panels])
    y0 = np.array([p.y0 for p in panels])
    y1 = np.array([p.y1 for p in panels])
    hx = 0.5 * (x1 - x0)
    hy = 0.5 * (y1 - y0)
    cx = 0.5 * (x1 + x0)
    cy = 0.5 * (y1 + y0)

    def tensor(nodes, weights):
        k = len(nodes)
        X = np.broadcast_to(
            cx[:, None, None] + hx[:, None, None] * nodes[None, :, None], (P, k, k)
        )
        Y = np.broadcast_to(
            cy[:, None, None] + hy[:, None, None] * nodes[None, None, :], (P, k, k)
        )
        F = func(X.ravel(), Y.ravel()).reshape(P, k, k)
        W = weights[:, None] * weights[None, :]
        return hx * hy * np.tensordot(F, W, axes=([1, 2], [0, 1]))

    i7 = tensor(_NODES7, _WEIGHTS7)
    i3 = tensor(_NODES3, _WEIGHTS3)
    for k, p in enumerate(panels):
        p.value = float(i7[k])
        p.err = abs(float(i7[k] - i3[k]))


def _touches(p: _Panel, half: float) -> bool:
    # contact with the closed excluded square [-half, half]^2
    return (p.x0 <= half and p.x1 >= -half) and (p.y0 <= half and p.y1 >= -half)


def integrate_rectangles(
    func: Callable[[np.ndarray, np.ndarray], np.ndarray],
    rects: Sequence[tuple[float, float, float, float]],
    tol: float,
    budget: int = DEFAULT_BUDGET,
    origin_halfwidth: float | None = None,
    min_origin_depth: int = 4,
) -> tuple[float, float, int]:
    """Integrate func over a union of rectangles to relative tolerance tol.

    Returns (value, error_bound, evaluations).  ``origin_halfwidth`` marks
    the excluded square whose neighbourhood is pre-refined.  Raises
    ``ToleranceNotMet`` when the evaluation budget runs out first.
    """
    next_index = 0
    panels: dict[int, _Panel] = {}

    def make(x0, x1, y0, y1, depth):
        nonlocal next_index
        p = _Panel(x0, x1, y0, y1, depth, next_index)
        next_index += 1
        return p

    fresh = [make(*r, 0) for r in rects if r[1] > r[0] and r[3] > r[2]]

    # Pre-subdivide panels in contact with the excluded square.
    if origin_halfwidth is not None:
        queued = []
        while fresh:
            p = fresh.pop()
            if p.depth < min_origin_depth and _touches(p, origin_halfwidth):
                xm = 0.5 * (p.x0 + p.x1)
                ym = 0.5 * (p.y0 + p.y1)
                fresh.extend(
                    make(a, b, c, d, p.depth + 1)
                    for a, b, c, d in (
                        (p.x0, xm, p.y0, ym),
                        (xm, p.x1, p.y0, ym),
                        (p.x0, xm, ym, p.y1),
                        (xm, p.x1, ym, p.y1),
                    )
                )
            else:
                queued.append(p)
        fresh = queued

    evals = 0

    def absorb(batch):
        nonlocal evals
        _evaluate_panels(func, batch)
        evals += _EVALS_PER_PANEL * len(batch)
        for p in batch:
            panels[p.index] = p

    absorb(fresh)

    while True:
        total = float(np.sum([p.value for p in panels.values()]))
        err_total = float(np.sum([p.err for p in panels.values()]))
        target = tol * max(abs(total), 1e-300)
        if err_total <= target:
            break
        if evals >= budget:
            raise ToleranceNotMet(
                f"budget {budget} exhausted: error {err_total:.3e} "
                f"vs target {target:.3e}"
            )
        # Equidistribution: split every panel above half its fair share of
        # the error target.  If the total exceeds the target, at least one
        # panel does, so progress is guaranteed; panels already below their
        # share are never touched.
        share = 0.5 * target / len(panels)
        batch = [p for p in panels.values() if p.err > share]
        if not batch:
            batch = [max(panels.values(), key=lambda p: (p.err, -p.index))]
        batch.sort(key=lambda p: p.index)
        children = []
        for p in batch:
            del panels[p.index]
            xm = 0.5 * (p.x0 + p.x1)
            ym = 0.5 * (p.y0 + p.y1)
            children.extend(
                make(a, b, c, d, p.depth + 1)
                for a, b, c, d in (
                    (p.x0, xm, p.y0, ym),
                    (xm, p.x1, p.y0, ym),
                    (p.x0, xm, ym, p.y1),
                    (xm, p.x1, ym, p.y1),
                )
            )
        absorb(children)

    ordered = sorted(panels.values(), key=lambda p: p.index)
    value = neumaier_sum([p.value for p in ordered])
    return value, err_total, evals


# ---------------------------------------------------------------------------
# Domain decompositions
# ---------------------------------------------------------------------------

def _punctured_box_rects(outer: float, inner: float, quadrant: bool):
    """Rectangles covering [-outer, outer]^2 \\ [-inner, inner]^2, folded.

    With quadrant folding (integrand even in each coordinate) the returned
    rectangles tile the first quadrant and carry weight 4; otherwise they
    tile the half-plane x >= 0 (centrally symmetric integrand) with
    weight 2.
    """
    if quadrant:
        rects = [
            (inner, outer, 0.0, inner),
            (0.0, inner, inner, outer),
            (inner, outer, inner, outer),
        ]
        return rects, 4.0
    rects = [
        (0.0, inner, inner, outer),
        (0.0, inner, -outer, -inner),
        (inner, outer, -outer, outer),
    ]
    return rects, 2.0


def _f_integrand(spec: LatticeSpec, floor: float):
    def func(x, y):
        den = psi_values(spec, x, y)
        if den.min() < floor:
            raise ToleranceNotMet("integrand singular inside the domain")
        return 1.0 / den

    return func


def _fm_integrand(spec: LatticeSpec, m: int, floor: float):
    def func(x, y):
        den = pm_values(spec, m, x, y)
        if den.min() < floor:
            raise ToleranceNotMet("p_m vanished inside the domain")
        return 1.0 / den

    return func


# ---------------------------------------------------------------------------
# The integrals
# ---------------------------------------------------------------------------

def in_f_numeric(
    spec: LatticeSpec,
    n: int,
    tol: float = 1e-10,
    budget: int = DEFAULT_BUDGET,
    floor: float = PSI_FLOOR,
) -> SumResult:
    """I_n(f) = (n/2pi)^2 * integral of 1/psi over [-pi,pi]^2 minus the
    center square of half-width pi/n.

    The domain is the symmetric form of the summation region (equal to the
    parity-shifted one by periodicity of psi).  ``tol`` is the requested
    relative tolerance; the adaptive error bound lands in ``err_estimate``.
    """
    if n < 2:
        raise ValueError("in_f_numeric needs n >= 2")
    if tol < 1e-12:
        raise ValueError("tol below 1e-12 is not supported in binary64")
    h = math.pi / n
    rects, weight = _punctured_box_rects(math.pi, h, spec.axis_symmetric)
    raw, err, evals = integrate_rectangles(
        _f_integrand(spec, floor), rects, tol, budget, origin_halfwidth=h
    )
    scale = weight / (2.0 * math.pi / n) ** 2
    return SumResult(
        value=scale * raw,
        n=n,
        method="quadrature",
        terms=0,
        err_estimate=scale * err,
    )


def in_fm_numeric(
    spec: LatticeSpec,
    n: int,
    m: int,
    beta: float | None,
    tol: float = 1e-10,
    budget: int = DEFAULT_BUDGET,
    floor: float = PSI_FLOOR,
) -> SumResult:
    """I_n(f_m) over the beta box (or the full symmetric domain if beta is None).

    The beta box is the union of the grid cells whose centers satisfy
    |t_j|, |t_k| <= sqrt(5(1-beta))/sbar, i.e. the square of half-width
    (J + 1/2) * 2pi/n minus the center cell; its corners stay inside the
    radius where p_m is provably positive.  beta=None (full domain) is only
    safe for m = 1, where p_1 vanishes nowhere but the origin.
    """
    if n < 2:
        raise ValueError("in_fm_numeric needs n >= 2")
    if m < 1:
        raise ValueError("m must be >= 1")
    if beta is None and m >= 2:
        raise ValueError("m >= 2 requires a beta-restricted domain")
    delta = 2.0 * math.pi / n
    h = 0.5 * delta
    if beta is None and n % 2 == 0:
        # Full domain, even n: f_m is not periodic, so the parity-shifted
        # box [-pi-h, pi-h]^2 minus the center cell must be used as is
        # (no symmetry folding applies).
        lo, hi = -math.pi - h, math.pi - h
        rects = [
            (lo, -h, lo, hi),
            (h, hi, lo, hi),
            (-h, h, h, hi),
            (-h, h, lo, -h),
        ]
        weight = 1.0
    else:
        if beta is None:
            outer = math.pi
        else:
            limit = beta_index_limit(n, beta, spec.sbar)
            outer = (limit + 0.5) * delta
        rects, weight = _punctured_box_rects(outer, h, spec.axis_symmetric)
    raw, err, evals = integrate_rectangles(
        _fm_integrand(spec, m, floor), rects, tol, budget, origin_halfwidth=h
    )
    scale = weight / delta**2
    return SumResult(
        value=scale * raw,
        n=n,
        method="quadrature",
        terms=0,
        err_estimate=scale * err,
    )


def in_f1_closed(
    spec: LatticeSpec,
    n: int,
    tol: float = 1e-12,
    budget: int = DEFAULT_BUDGET,
) -> SumResult:
    """I_n(f_1) by the polar closed form.

    In polar coordinates the integral of f_1 = 2L/(a x^2 + b xy + c y^2)
    over the region between two concentric squares factorizes, so for odd n

        I_n(f_1) = (2L / (pi sqrt|d|)) n^2 log n        (exact),

    while for even n the parity-shifted domain contributes the exact part
    (L / (pi sqrt(det S^T S))) n^2 (log n + log(1 - 1/n^2)/2) minus the mean
    of f_1 over the corner box [pi-pi/n, pi+pi/n] x [-pi-pi/n, -pi+pi/n],
    which is evaluated by adaptive quadrature (f_1 is smooth there).
    """
    if n < 2:
        raise ValueError("in_f1_closed needs n >= 2")
    form = spec.form
    L = spec.size
    lead = 2.0 * L / (math.pi * form.sqrt_abs_d)
    if n % 2 == 1:
        return SumResult(
            value=lead * (n * n) * math.log(n),
            n=n,
            method="expansion",
            terms=0,
            err_estimate=0.0,
        )
    exact = lead * (n * n) * (math.log(n) + 0.5 * math.log1p(-1.0 / (n * n)))
    h = math.pi / n
    a, b, c = form.a, form.b, form.c

    def f1(x, y):
        return (2.0 * L) / (a * x * x + b * x * y + c * y * y)

    corner_rect = (math.pi - h, math.pi + h, -math.pi - h, -math.pi + h)
    raw, err, _ = integrate_rectangles(f1, [corner_rect], tol, budget)
    delta2 = (2.0 * math.pi / n) ** 2
    return SumResult(
        value=exact - raw / delta2,
        n=n,
        method="expansion",
        terms=0,
        err_estimate=err / delta2,
    )
