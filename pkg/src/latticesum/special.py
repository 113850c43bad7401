"""Scalar special-function kernels used by the asymptotic expansions.

Everything here is plain binary64. The targets are modest (absolute errors
around 1e-14, relative around 1e-13) because the downstream acceptance
tolerances sit at 1e-10 and above, so double precision leaves headroom.

Contents:

* ``clausen_cl2`` -- Clausen function Cl2(theta) = sum_k sin(k theta)/k^2.
* ``dilog_complex`` -- dilogarithm Li2(z) on the plane cut along [1, inf).
* ``kummer_omega`` -- the auxiliary angle arctan(r sin t / (1 - r cos t)).
* ``log_abs_eta`` -- log|eta(tau)| for the Dedekind eta function.
* ``digamma_complex`` -- digamma for complex arguments.
* ``bernoulli_numbers`` / ``bernoulli_poly`` -- Bernoulli data for
  Euler-Maclaurin corrections.
* ``constants`` -- Euler's gamma, Catalan's constant, Gamma(1/4), Gamma(1/3).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from scipy.special import zeta as _scipy_zeta

from .errors import (
    CutViolation,
    DegeneratePoint,
    LowerHalfPlane,
    PoleAt,
)

_TWO_PI = 2.0 * math.pi
_HALF_PI = 0.5 * math.pi
_PI2_OVER_6 = math.pi * math.pi / 6.0

# Exact binary64 roundings of the named constants.
EULER_GAMMA = 0.5772156649015329
CATALAN = 0.915965594177219
GAMMA_QUARTER = 3.625609908221908
GAMMA_THIRD = 2.6789385347077475


@dataclass(frozen=True)
class Constants:
    euler_gamma: float
    catalan: float
    gamma_quarter: float
    gamma_third: float


def constants() -> Constants:
    """Named constants entering the closed-form expansion coefficients."""
    return Constants(EULER_GAMMA, CATALAN, GAMMA_QUARTER, GAMMA_THIRD)


# ---------------------------------------------------------------------------
# Bernoulli numbers and polynomials
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _bernoulli_exact(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2 convention)."""
    if n == 0:
        return Fraction(1)
    # sum_{k=0}^{n} C(n+1, k) B_k = 0  for n >= 1
    acc = Fraction(0)
    for k in range(n):
        acc += Fraction(math.comb(n + 1, k)) * _bernoulli_exact(k)
    return -acc / (n + 1)


def bernoulli_numbers(p: int) -> list[float]:
    """B_0 .. B_p as binary64 floats; ``p`` capped at 20.

    The first values are 1, -1/2, 1/6, 0, -1/30, ... Each returned float is
    the correctly rounded value of the exact rational.
    """
    if not 0 <= p <= 20:
        raise ValueError("bernoulli_numbers supports 0 <= p <= 20")
    return [float(_bernoulli_exact(k)) for k in range(p + 1)]


# Coefficients of B_p(x) on [0, 1), ascending powers.
_BERNOULLI_POLY = (
    (1.0,),
    (-0.5, 1.0),
    (1.0 / 6.0, -1.0, 1.0),
    (0.0, 0.5, -1.5, 1.0),
    (-1.0 / 30.0, 0.0, 1.0, -2.0, 1.0),
)


def bernoulli_poly(p: int, x: float) -> float:
    """Periodic Bernoulli polynomial B_p({x}) with B_p(x+1) = B_p(x)."""
    if not 0 <= p <= 4:
        raise ValueError("bernoulli_poly supports 0 <= p <= 4")
    frac = x - math.floor(x)
    acc = 0.0
    for c in reversed(_BERNOULLI_POLY[p]):
        acc = acc * frac + c
    return acc


# ---------------------------------------------------------------------------
# Clausen function
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _zeta_even(n: int) -> float:
    """zeta(2n) for the Clausen power series."""
    return float(_scipy_zeta(2 * n))


def _cl2_series(t: float) -> float:
    """Cl2 on [0, pi/2] via t - t log t + sum_n zeta(2n)/(n(2n+1)) t (t/2pi)^{2n}.

    The series is the integrated Laurent expansion of -log(2 sin(t/2)); on
    [0, pi/2] the ratio (t/2pi)^2 <= 1/16 so ~15 terms reach 1e-17.
    """
    if t == 0.0:
        return 0.0
    u = (t / _TWO_PI) ** 2
    s = 0.0
    p = t
    for n in range(1, 40):
        p *= u
        term = _zeta_even(n) / (n * (2 * n + 1)) * p
        s += term
        if term < 1e-18:
            break
    return t - t * math.log(t) + s


def _cl2_on_0_pi(t: float) -> float:
    """Cl2 on [0, pi] via the series plus the duplication identity.

    For t in (pi/2, pi] write t = pi - x and use
    Cl2(pi - x) = Cl2(x) - Cl2(2x)/2; only the doubled argument can fall
    outside the series range, so iterate with a halving prefactor.  The loop
    cap covers the fixed point t = 2*pi/3 (remainder < 2^-100).
    """
    total = 0.0
    coef = 1.0
    for _ in range(100):
        if t <= _HALF_PI:
            return total + coef * _cl2_series(t)
        x = math.pi - t
        total += coef * _cl2_series(x)
        coef *= -0.5
        t = 2.0 * x
    return total


def clausen_cl2(theta: float) -> float:
    """Clausen function Cl2(theta) = sum_{k>=1} sin(k theta)/k^2.

    Odd and 2*pi-periodic; the argument is reduced with IEEE remainder so
    that Cl2(-theta) == -Cl2(theta) holds bitwise.
    """
    r = math.remainder(theta, _TWO_PI)
    if r == 0.0:
        return 0.0
    if r < 0.0:
        return -_cl2_on_0_pi(-r)
    return _cl2_on_0_pi(r)


# ---------------------------------------------------------------------------
# Dilogarithm
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _li2_log_coeffs() -> list[float]:
    """B_k / (k+1)! for the log-argument dilogarithm series."""
    fact = Fraction(1)
    coeffs = []
    for k in range(0, 76):
        fact *= k + 1
        coeffs.append(float(_bernoulli_exact(k) / fact))
    return coeffs


def _li2_power_series(z: complex) -> complex:
    """sum z^m / m^2, geometric for |z| <= 0.6."""
    acc = 0j
    term = complex(1.0)
    for m in range(1, 200):
        term *= z
        inc = term / (m * m)
        acc += inc
        if abs(inc) < 1e-18 * (1.0 + abs(acc)):
            break
    return acc


def _li2_log_series(z: complex) -> complex:
    """Li2 via the Bernoulli series in w = -log(1-z).

    Li2(z) = sum_{k>=0} B_k w^{k+1} / (k+1)!, convergent for |w| < 2*pi.
    After the inversion/reflection reductions |w| <= ~3.3, which keeps the
    ratio below 0.52 per order.  This covers the lens |z| ~ 1, re z <= 1/2
    where the plain power series stalls.
    """
    w = -cmath.log(1.0 - z)
    coeffs = _li2_log_coeffs()
    wp = complex(1.0)
    acc = 0j
    for k, c in enumerate(coeffs):
        wp *= w
        if c == 0.0:
            continue
        inc = c * wp
        acc += inc
        if k > 2 and abs(inc) < 1e-18 * abs(acc):
            break
    return acc


def dilog_complex(z: complex) -> complex:
    """Dilogarithm Li2(z), analytic on the plane cut along [1, inf).

    Arguments with im(z) == 0 and re(z) >= 1 raise ``CutViolation``.
    Accuracy is around 1e-13 relative for |z| <= 2 (all arguments arising
    from normalized quadratic forms satisfy |z| <= 1).
    """
    z = complex(z)
    if z.imag == 0.0 and z.real >= 1.0:
        raise CutViolation(f"Li2 argument {z.real} lies on the cut [1, inf)")
    if z == 0:
        return 0j
    acc = 0j
    sign = 1.0
    if abs(z) > 1.0:
        lg = cmath.log(-z)
        acc += sign * (-_PI2_OVER_6 - 0.5 * lg * lg)
        sign = -sign
        z = 1.0 / z
    if z.real > 0.5:
        acc += sign * (_PI2_OVER_6 - cmath.log(z) * cmath.log(1.0 - z))
        sign = -sign
        z = 1.0 - z
    if abs(z) <= 0.6:
        return acc + sign * _li2_power_series(z)
    return acc + sign * _li2_log_series(z)


def kummer_omega(r: float, theta: float) -> float:
    """The angle omega = arctan(r sin(theta) / (1 - r cos(theta))).

    Defined for 0 < r <= 1; the point r = 1, theta = 0 (mod 2*pi) is
    degenerate and raises ``DegeneratePoint``.
    """
    if not 0.0 < r <= 1.0:
        raise ValueError("kummer_omega requires 0 < r <= 1")
    if r == 1.0 and math.remainder(theta, _TWO_PI) == 0.0:
        raise DegeneratePoint("omega undefined at r = 1, theta = 0 (mod 2*pi)")
    num = r * math.sin(theta)
    den = 1.0 - r * math.cos(theta)
    return math.atan2(num, den)


# ---------------------------------------------------------------------------
# Dedekind eta
# ---------------------------------------------------------------------------

def log_abs_eta(tau: complex) -> float:
    """log|eta(tau)| with eta(tau) = q^{1/24} prod_k (1 - q^k), q = e^{2 pi i tau}.

    Requires im(tau) > 0.  The product is truncated once k |q|^k drops below
    1e-18 (1 - |q|), which bounds the dropped log-tail by a geometric series;
    the stated absolute accuracy of 1e-15 holds for im(tau) >= 0.3.
    """
    tau = complex(tau)
    if tau.imag <= 0.0:
        raise LowerHalfPlane(f"eta requires im(tau) > 0, got {tau.imag}")
    q = cmath.exp(2j * math.pi * tau)
    absq = abs(q)
    acc = -math.pi * tau.imag / 12.0
    qk = complex(1.0)
    cutoff = 1e-18 * (1.0 - absq)
    for k in range(1, 10000):
        qk *= q
        acc += math.log(abs(1.0 - qk))
        if k * absq**k < cutoff:
            break
    return acc


# ---------------------------------------------------------------------------
# Digamma
# ---------------------------------------------------------------------------

def _cot_safe(w: complex) -> complex:
    """cot(w) without overflow for large |im(w)|.

    cot(w) = -i (1 + 2q/(1-q)) with q = e^{2iw} when im(w) > 0, and the
    conjugate form when im(w) < 0; |q| < 1 in either branch.
    """
    if w.imag > 0.0:
        q = cmath.exp(2j * w)
        return -1j * (1.0 + 2.0 * q / (1.0 - q))
    if w.imag < 0.0:
        q = cmath.exp(-2j * w)
        return 1j * (1.0 + 2.0 * q / (1.0 - q))
    return complex(1.0 / math.tan(w.real))


def digamma_complex(z: complex) -> complex:
    """Digamma psi(z) for complex z off the poles 0, -1, -2, ...

    Arguments with re(z) < 1/2 are reflected with
    psi(z) = psi(1-z) - pi*cot(pi*z); the remainder shifts with
    psi(z) = psi(z+1) - 1/z until |z| >= 12 and then applies the asymptotic
    series log z - 1/(2z) - sum B_{2n}/(2n z^{2n}) through B_12.  The
    reflection keeps the asymptotic argument away from the negative axis,
    where the series alone loses accuracy.  Relative accuracy ~1e-13 off the
    poles.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleAt(f"digamma pole at {z.real}")
    if z.real < 0.5:
        return digamma_complex(1.0 - z) - math.pi * _cot_safe(math.pi * z)
    acc = 0j
    while abs(z) < 12.0:
        acc -= 1.0 / z
        z += 1.0
    w = 1.0 / z
    w2 = w * w
    # B_{2n}/(2n) for n = 1..6: 1/12, -1/120, 1/252, -1/240, 1/132, -691/32760
    tail = w2 * (
        1.0 / 12.0
        + w2 * (
            -1.0 / 120.0
            + w2 * (
                1.0 / 252.0
                + w2 * (-1.0 / 240.0 + w2 * (1.0 / 132.0 - w2 * (691.0 / 32760.0)))
            )
        )
    )
    return acc + cmath.log(z) - 0.5 * w - tail
