"""Expansion coefficients, order certification, and internal re-derivations."""

import cmath
import math

import numpy as np
import pytest

from latticesum.errors import InsufficientSamples
from latticesum.asymptotics import (
    clausen_combination,
    composite_fn_estimate,
    euler_maclaurin,
    euler_maclaurin_remainder_bound,
    fn_f1_expansion,
    fn_f1_expansion_assembled,
    gn_expansion,
    gn_via_euler_maclaurin,
    hn_expansion,
    in_f1_expansion,
    leading_term,
    residual_order_fit,
    theorem2_combination,
    un_expansion,
    ExpansionTerms,
)
from latticesum.lattice import SQUARE, TRIANGULAR, UNIONJACK, QuadraticForm
from latticesum.quadrature import in_f1_closed
from latticesum.special import (
    CATALAN,
    EULER_GAMMA,
    GAMMA_QUARTER,
    clausen_cl2,
    dilog_complex,
    log_abs_eta,
)
from latticesum.sums import fn_direct, gn_direct, hn_direct, un_direct

ALL_SPECS = (SQUARE, TRIANGULAR, UNIONJACK)
F101 = QuadraticForm(1, 0, 1)


def random_normalized_forms(count, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        a = float(rng.uniform(0.3, 4.0))
        c = float(rng.uniform(a, 6.0))
        b = float(rng.uniform(0.0, 1.8 * math.sqrt(a * c)))
        out.append(QuadraticForm(a, b, c))
    return out


# ---------------------------------------------------------------------------
# ExpansionTerms mechanics
# ---------------------------------------------------------------------------

def test_expansion_terms_evaluation():
    e = ExpansionTerms(c_n2logn=1.0, c_n2=2.0, c_n=3.0, c_1_even=4.0, c_1_odd=5.0,
                       c_inv_n=6.0, c_inv_n2=7.0, c_inv_n3=8.0)
    n = 10
    expect = 100 * math.log(10) + 200 + 30 + 4 + 0.6 + 0.07 + 0.008
    assert e.evaluate(n) == pytest.approx(expect, rel=1e-15)
    assert e.evaluate(11) == pytest.approx(
        121 * math.log(11) + 242 + 33 + 5 + 6 / 11 + 7 / 121 + 8 / 1331, rel=1e-15
    )
    g = ExpansionTerms(c_n2logn=2.0, c_1_even=1.0, c_1_odd=1.0, scale="log")
    assert g.evaluate(7) == pytest.approx(2 * math.log(7) + 1, rel=1e-15)
    with pytest.raises(ValueError):
        ExpansionTerms(c_n2=1.0, scale="log")


# ---------------------------------------------------------------------------
# G_n expansion
# ---------------------------------------------------------------------------

def test_gn_expansion_log_coefficient():
    assert gn_expansion(F101).c_n2logn == pytest.approx(math.pi, rel=1e-15)


def test_gn_expansion_residual_order():
    # n^4 |residual| / log n stays bounded
    for form in (F101, QuadraticForm(1, 1, 1), QuadraticForm(2, 1, 3)):
        ex = gn_expansion(form)
        vals = [
            abs(gn_direct(form, n).value - ex.evaluate(n)) * n**4 / math.log(n)
            for n in (100, 200, 400, 800)
        ]
        assert max(vals) < 1.0


def test_gn_expansion_symmetry_invariance():
    for form in random_normalized_forms(10, seed=3):
        base = gn_expansion(form)
        for variant in (
            QuadraticForm(form.c, form.b, form.a),
            QuadraticForm(form.a, -form.b, form.c),
        ):
            other = gn_expansion(variant)
            for field in ("c_n2logn", "c_1_even", "c_inv_n", "c_inv_n2", "c_inv_n3"):
                assert getattr(other, field) == pytest.approx(
                    getattr(base, field), abs=1e-13, rel=1e-13
                )


def test_gn_expansion_scaling():
    # G_n(lambda Q) = G_n(Q)/lambda transfers to every coefficient
    base = gn_expansion(QuadraticForm(1, 1, 1))
    scaled = gn_expansion(QuadraticForm(2, 2, 2))
    for field in ("c_n2logn", "c_1_even", "c_inv_n", "c_inv_n2", "c_inv_n3"):
        assert getattr(scaled, field) == pytest.approx(
            getattr(base, field) / 2.0, rel=1e-13
        )


def test_gn_constant_via_euler_maclaurin_rederivation():
    # the Euler-Maclaurin route (numeric integral of the arctan kernel, eta
    # piece, harmonic and zeta tails) reproduces G_n to O(1/n^2), pinning
    # the Clausen/eta constant independently
    for form in (F101, QuadraticForm(2, 1, 3), QuadraticForm(1, 1, 1)):
        for n in (150, 300):
            em = gn_via_euler_maclaurin(form, n)
            assert abs(em - gn_direct(form, n).value) < 5.0 / n**2
            assert abs(em - gn_expansion(form).evaluate(n)) < 5.0 / n**2


def test_gn_clausen_vs_dilog_constant():
    # (pi/2 - atan((c-a)/sd)) log sqrt(a/c) + C(a,b,c)/2 = im(Li2(mu) - Li2(-mu))
    for form in random_normalized_forms(20, seed=8):
        a, b, c = form.a, form.b, form.c
        sd = form.sqrt_abs_d
        mu = form.mu
        lhs = (math.pi / 2 - math.atan((c - a) / sd)) * math.log(
            math.sqrt(a / c)
        ) + 0.5 * clausen_combination(a, b, c)
        rhs = (dilog_complex(mu) - dilog_complex(-mu)).imag
        assert abs(lhs - rhs) < 1e-12


# ---------------------------------------------------------------------------
# F_n(f_1) expansion
# ---------------------------------------------------------------------------

def test_fn_f1_expansion_square_coefficients():
    fe = fn_f1_expansion(SQUARE)
    assert fe.c_n2logn == pytest.approx(2 / math.pi, rel=1e-15)
    expect = (2 / math.pi) * (
        EULER_GAMMA - 2 * log_abs_eta(1j) - 2 * CATALAN / math.pi - math.log(2)
    )
    assert fe.c_n2 == pytest.approx(expect, rel=1e-14)


def test_fn_f1_expansion_unionjack_coefficients():
    fe = fn_f1_expansion(UNIONJACK)
    assert fe.c_n2logn == pytest.approx(4 / (3 * math.pi), rel=1e-15)
    expect = (4 / (3 * math.pi)) * (
        EULER_GAMMA - math.log(2) - 2 * log_abs_eta(1j) - 2 * CATALAN / math.pi
    )
    assert fe.c_n2 == pytest.approx(expect, rel=1e-14)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.name)
def test_fn_f1_expansion_residual_order(spec):
    fe = fn_f1_expansion(spec)
    for ns in ((101, 201, 401, 801), (100, 200, 400, 800)):
        vals = [
            abs(fn_direct(spec, n, m=1).value - fe.evaluate(n)) * n * n / math.log(n)
            for n in ns
        ]
        assert max(vals) < 1.0


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.name)
def test_fn_f1_expansion_matches_assembled(spec):
    # the G/H/U substitution reproduces every slot; the n-slot vanishes
    asm = fn_f1_expansion_assembled(spec)
    fe = fn_f1_expansion(spec)
    assert asm["c_n2logn"] == pytest.approx(fe.c_n2logn, abs=1e-12)
    assert asm["c_n2_odd"] == pytest.approx(fe.c_n2, abs=1e-12)
    assert asm["c_n2_even"] == pytest.approx(fe.c_n2, abs=1e-12)
    assert abs(asm["c_n_odd"]) < 1e-12
    assert abs(asm["c_n_even"]) < 1e-12
    assert asm["c_1_odd"] == pytest.approx(fe.c_1_odd, abs=1e-12)
    assert asm["c_1_even"] == pytest.approx(fe.c_1_even, abs=1e-12)


# ---------------------------------------------------------------------------
# I_n(f_1) expansion
# ---------------------------------------------------------------------------

def test_in_f1_expansion_constants():
    ie = in_f1_expansion(SQUARE)
    assert ie.c_n2logn == pytest.approx(2 / math.pi, rel=1e-15)
    assert ie.c_1_odd == 0.0
    # -(L/(pi sqrt|d|) + (2L/pi^2)/(a-b+c)) with L=2, sqrt|d|=2, a-b+c=2
    assert ie.c_1_even == pytest.approx(-(1 / math.pi + 2 / math.pi**2), rel=1e-14)
    ib = in_f1_expansion(UNIONJACK)
    assert ib.c_1_even == pytest.approx(
        -(2 / (3 * math.pi) + 4 / (3 * math.pi**2)), rel=1e-14
    )


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.name)
def test_in_f1_expansion_even_residual(spec):
    ie = in_f1_expansion(spec)
    vals = [
        abs(in_f1_closed(spec, n).value - ie.evaluate(n)) * n * n
        for n in (16, 32, 64, 128)
    ]
    assert max(vals) < 3.0


def test_leading_terms():
    assert leading_term(SQUARE) == pytest.approx(2 / math.pi, rel=1e-15)
    assert leading_term(TRIANGULAR) == pytest.approx(math.sqrt(3) / math.pi, rel=1e-15)
    assert leading_term(UNIONJACK) == pytest.approx(4 / (3 * math.pi), rel=1e-15)


# ---------------------------------------------------------------------------
# H_n / U_n expansions
# ---------------------------------------------------------------------------

def test_hn_expansion_against_direct():
    n = 10**4
    assert abs(hn_expansion().evaluate(n) - hn_direct(n)) < 1e-12


def test_un_expansion_against_direct():
    ue = un_expansion(F101)
    n = 500
    assert abs(ue.evaluate(n) - un_direct(F101, n)) * n**5 < 10.0
    scaled = un_expansion(QuadraticForm(3, 0, 3))
    assert scaled.evaluate(100) == pytest.approx(ue.evaluate(100) / 3.0, rel=1e-14)


# ---------------------------------------------------------------------------
# composite estimator and the m-combinations
# ---------------------------------------------------------------------------

def test_composite_estimate_square():
    est = composite_fn_estimate(SQUARE, 256, tol=1e-9)
    direct = fn_direct(SQUARE, 256).value
    assert abs(est.value - direct) <= 20.0 * math.log(256)  # test budget constant
    assert est.err_estimate > 0


def test_composite_estimate_constant_square():
    # (estimate - lead n^2 log n)/n^2 approaches (2 gamma + log(32 pi/Gamma(1/4)^4))/pi
    c_sq = (2 * EULER_GAMMA + math.log(32 * math.pi / GAMMA_QUARTER**4)) / math.pi
    for n in (257, 513):
        est = composite_fn_estimate(SQUARE, n, tol=1e-9)
        r = (est.value - (2 / math.pi) * n * n * math.log(n)) / (n * n)
        assert abs(r - c_sq) <= 50.0 * math.log(n) / n**2


def test_composite_estimate_constant_unionjack():
    c_b2 = (2 / (3 * math.pi)) * (
        2 * EULER_GAMMA + math.log(96 * math.pi / GAMMA_QUARTER**4)
    )
    n = 257
    est = composite_fn_estimate(UNIONJACK, n, tol=1e-9)
    r = (est.value - (4 / (3 * math.pi)) * n * n * math.log(n)) / (n * n)
    assert abs(r - c_b2) <= 80.0 * math.log(n) / n**2


def test_theorem2_combination_smoke():
    v = theorem2_combination(SQUARE, 8, 1, 0.5, tol=1e-9)
    assert math.isfinite(v)
    v2 = theorem2_combination(TRIANGULAR, 8, 2, 0.5, tol=1e-9)
    assert math.isfinite(v2)


# ---------------------------------------------------------------------------
# residual-order fitting
# ---------------------------------------------------------------------------

def test_residual_fit_synthetic_logn_over_n4():
    samples = [(n, 3.7 * math.log(n) / n**4) for n in (100, 200, 400, 800, 1600)]
    rep = residual_order_fit(samples, "logn_over_n4")
    assert rep.passed
    assert rep.fitted_exponent == pytest.approx(-4.0, abs=1e-6)
    assert rep.fitted_log_power == 1


def test_residual_fit_synthetic_const():
    samples = [(n, 0.3 + 0.001 * math.sin(n)) for n in (50, 100, 200, 400)]
    rep = residual_order_fit(samples, "const")
    assert rep.passed
    assert abs(rep.fitted_exponent) < 0.05


def test_residual_fit_rejects_wrong_order():
    samples = [(n, 2.0 / n) for n in (50, 100, 200, 400)]
    rep = residual_order_fit(samples, "logn_over_n4")
    assert not rep.passed


def test_residual_fit_gn_certification():
    form = F101
    ex = gn_expansion(form)
    samples = [
        (n, gn_direct(form, n).value - ex.evaluate(n)) for n in (100, 200, 400, 800, 1600)
    ]
    rep = residual_order_fit(samples, "logn_over_n4")
    assert rep.passed


def test_residual_fit_fn_f1_certification():
    fe = fn_f1_expansion(SQUARE)
    samples = [
        (n, fn_direct(SQUARE, n, m=1).value - fe.evaluate(n))
        for n in (101, 201, 401, 801)
    ]
    rep = residual_order_fit(samples, "logn_over_n2")
    assert rep.passed


def test_residual_fit_validation():
    with pytest.raises(InsufficientSamples):
        residual_order_fit([(10, 1.0), (20, 0.5), (40, 0.2)], "const")
    with pytest.raises(InsufficientSamples):
        residual_order_fit([(10, 1.0), (20, 0.5), (20, 0.2), (40, 3.0)], "const")
    with pytest.raises(ValueError):
        residual_order_fit([(10, 1.0), (20, 0.5), (40, 0.2), (80, 0.1)], "mystery")


# ---------------------------------------------------------------------------
# Euler-Maclaurin
# ---------------------------------------------------------------------------

def test_euler_maclaurin_constant_function():
    # g = 1: both sides are (n-1)/n
    got = euler_maclaurin(lambda x: 1.0, 10, 1, [(1.0, 1.0)], integral=1.0)
    assert got == pytest.approx(9 / 10, rel=1e-15)


def test_euler_maclaurin_quadratic_exact():
    # g = x^2 with p = 3: the remainder vanishes (B_3 term is zero and
    # g''' = 0), so the reconstruction is exact
    n = 10
    got = euler_maclaurin(
        lambda x: x * x,
        n,
        3,
        [(0.0, 1.0), (0.0, 2.0), (2.0, 2.0)],
        integral=1.0 / 3.0,
    )
    direct = math.fsum((j / n) ** 2 for j in range(1, n)) / n
    assert got == pytest.approx(direct, abs=1e-16)


def test_euler_maclaurin_rational_kernel():
    # the form-kernel sum at the printed remainder order, derivatives from sympy
    sympy = pytest.importorskip("sympy")
    a, b, c = 1.0, 0.0, 1.0
    x = sympy.symbols("x")
    expr = 1 / (a * x**2 - b * x + c) + 1 / (a * x**2 + b * x + c)
    derivs = []
    for order in range(4):
        d = sympy.diff(expr, x, order)
        derivs.append((float(d.subs(x, 0)), float(d.subs(x, 1))))
    g = sympy.lambdify(x, expr, "math")
    for n in (100, 200):
        direct = math.fsum(g(j / n) for j in range(1, n)) / n
        em = euler_maclaurin(g, n, 4, derivs)
        assert abs(em - direct) < 20.0 / n**4
    # remainder bound helper is nonnegative and scales like n^-p
    samples = [float(sympy.diff(expr, x, 4).subs(x, t)) for t in np.linspace(0, 1, 9)]
    b1 = euler_maclaurin_remainder_bound(samples, 100, 4)
    b2 = euler_maclaurin_remainder_bound(samples, 200, 4)
    assert b1 > 0 and b1 / b2 == pytest.approx(16.0, rel=1e-12)


def test_euler_maclaurin_validation():
    with pytest.raises(ValueError):
        euler_maclaurin(lambda x: x, 10, 5, [(0, 1)] * 5)
    with pytest.raises(ValueError):
        euler_maclaurin(lambda x: x, 10, 2, [(0, 1)])
