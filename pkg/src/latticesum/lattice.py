"""Root-vector sets, the lattice kernel psi, and summation grids.

A lattice spec is a finite list of nonzero integer 2-vectors s_1..s_L whose
first two entries are the standard basis.  The kernel

    psi(x) = 1 - (1/L) sum_l cos(s_l . x) = (2/L) sum_l sin^2(s_l . x / 2)

is nonnegative, even, 2*pi-periodic in each coordinate, and vanishes
quadratically at the origin.  The sums and integrals in the rest of the
package are built from f = 1/psi and from the reciprocals of its Taylor
truncations

    p_m(x) = (1/L) sum_l sum_{j=1}^{m} (-1)^{j+1} (s_l . x)^{2j} / (2j)!

For m = 1 this is the positive definite quadratic form
(a x^2 + b xy + c y^2) / (2L) with integer a, b, c derived from the vectors.

Grids: t_j = 2*pi*j/n reduced to [-pi, pi); the unrestricted domain is all
(t_j, t_k) != (0, 0), and the beta-restricted domain keeps the points with
|t_j|, |t_k| <= sqrt(5*(1-beta))/sbar where sbar is the largest vector norm.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import NotPositiveDefinite, SingularPoint

TWO_PI = 2.0 * math.pi

#: Default floor below which psi / p_m counts as singular.
PSI_FLOOR = 1e-300

#: Vector components are capped so a, b, c stay exactly representable.
MAX_COMPONENT = 10**6


@dataclass(frozen=True)
class QuadraticForm:
    """Positive definite binary form a*j^2 + b*j*k + c*k^2 with d = b^2-4ac < 0."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a > 0 and self.c > 0):
            raise NotPositiveDefinite(f"need a, c > 0, got a={self.a}, c={self.c}")
        if self.d >= 0:
            raise NotPositiveDefinite(f"discriminant {self.d} is not negative")

    @property
    def d(self) -> float:
        return self.b * self.b - 4.0 * self.a * self.c

    @property
    def sqrt_abs_d(self) -> float:
        return math.sqrt(-self.d)

    @property
    def normalized(self) -> bool:
        """Whether 0 < a <= c and b >= 0 hold."""
        return self.a <= self.c and self.b >= 0

    def normalize(self) -> "QuadraticForm":
        """Equivalent form with 0 < a <= c and b >= 0.

        Uses the value-preserving symmetries (a, b, c) -> (c, b, a) and
        b -> -b of the associated lattice sums.
        """
        a, b, c = self.a, abs(self.b), self.c
        if a > c:
            a, c = c, a
        return QuadraticForm(a, b, c)

    @property
    def mu(self) -> complex:
        """The upper-half-plane point (-b + sqrt|d| i) / (2c)."""
        return complex(-self.b, self.sqrt_abs_d) / (2.0 * self.c)


class LatticeSpec:
    """An ordered set of integer root vectors with derived form data."""

    def __init__(self, vectors: Sequence[Sequence[int]], name: str | None = None):
        vecs = tuple((int(v[0]), int(v[1])) for v in vectors)
        if len(vecs) < 2:
            raise ValueError("need at least two vectors")
        if vecs[0] != (1, 0) or vecs[1] != (0, 1):
            raise ValueError("first two vectors must be (1,0) and (0,1)")
        for v in vecs:
            if v == (0, 0):
                raise ValueError("zero vector not allowed")
            if max(abs(v[0]), abs(v[1])) > MAX_COMPONENT:
                raise ValueError(f"vector component exceeds {MAX_COMPONENT}")
        self.vectors = vecs
        self.name = name
        self.size = len(vecs)
        a = sum(v[0] * v[0] for v in vecs)
        b = 2 * sum(v[0] * v[1] for v in vecs)
        c = sum(v[1] * v[1] for v in vecs)
        # b is even by construction, so det(S^T S) = a*c - (b/2)^2 is an
        # exact integer; d = -4 det(S^T S) < 0 because s_1, s_2 span.
        self.det_sts = a * c - (b // 2) ** 2
        if b * b - 4 * a * c >= 0:
            raise NotPositiveDefinite("vectors do not span the plane")
        self.form = QuadraticForm(float(a), float(b), float(c))
        self.sbar = math.sqrt(max(v[0] * v[0] + v[1] * v[1] for v in vecs))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"LatticeSpec({label} L={self.size} vectors={list(self.vectors)})"

    @cached_property
    def _s1(self) -> np.ndarray:
        return np.array([v[0] for v in self.vectors], dtype=float)

    @cached_property
    def _s2(self) -> np.ndarray:
        return np.array([v[1] for v in self.vectors], dtype=float)

    @cached_property
    def axis_symmetric(self) -> bool:
        """True when {+-s_l} is invariant under (s1, s2) -> (s1, -s2).

        This is the condition under which psi (and every p_m) is even in
        each coordinate separately, enabling quadrant folding of integrals.
        It implies b = 0.
        """
        pm = set()
        for v in self.vectors:
            pm.add(v)
            pm.add((-v[0], -v[1]))
        return all((v[0], -v[1]) in pm for v in pm)

    def domain(self, n: int, beta: float | None = None) -> "GridDomain":
        return GridDomain(n=n, beta=beta, sbar=self.sbar)


# Bundled specs.  "square" is the A1 x A1 root set, "triangular" the A2 one,
# and "unionjack" the B2 one.
SQUARE = LatticeSpec([(1, 0), (0, 1)], name="square")
TRIANGULAR = LatticeSpec([(1, 0), (0, 1), (1, 1)], name="triangular")
UNIONJACK = LatticeSpec([(1, 0), (0, 1), (1, -1), (1, 1)], name="unionjack")

NAMED_SPECS = {s.name: s for s in (SQUARE, TRIANGULAR, UNIONJACK)}


def load_spec(source) -> LatticeSpec:
    """Load a spec from a bundled name, a JSON file path, or a mapping.

    The JSON schema is ``{"vectors": [[1,0],[0,1], ...]}`` with order
    significant and the first two entries the standard basis.
    """
    if isinstance(source, LatticeSpec):
        return source
    if isinstance(source, str) and source in NAMED_SPECS:
        return NAMED_SPECS[source]
    if isinstance(source, (str, Path)):
        data = json.loads(Path(source).read_text())
        return LatticeSpec(data["vectors"], name=str(source))
    if isinstance(source, dict):
        return LatticeSpec(source["vectors"])
    raise ValueError(f"cannot interpret lattice spec source {source!r}")


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------

def box_radius(beta: float, sbar: float) -> float:
    """Half-width sqrt(5*(1-beta))/sbar of the restricted grid box."""
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    return math.sqrt(5.0 * (1.0 - beta)) / sbar

def lemma_radius(beta: float, sbar: float) -> float:
    """Radius sqrt(12*(1-beta))/sbar inside which p_m >= beta ||x||^2 / (2L).

    Strictly larger than the corner distance sqrt(2)*box_radius of the
    restricted box, so p_m stays positive on the whole box.
    """
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    return math.sqrt(12.0 * (1.0 - beta)) / sbar


def beta_index_limit(n: int, beta: float, sbar: float) -> int:
    """Largest index J with 2*pi*J/n <= box_radius (shared by sums/integrals)."""
    return int(math.floor(box_radius(beta, sbar) * n / TWO_PI + 1e-12))


def reduced_index(j: int, n: int) -> int:
    """Map j in [0, n) to the representative in [-n/2, n/2) (t in [-pi, pi))."""
    return j - n if 2 * j >= n else j


def reduced_angles(n: int) -> np.ndarray:
    """t_j = 2*pi*j/n reduced to [-pi, pi), indexed by j = 0..n-1."""
    j = np.arange(n)
    jr = np.where(2 * j >= n, j - n, j)
    return TWO_PI * jr / n


@dataclass(frozen=True)
class GridDomain:
    """The n x n summation grid, optionally beta-restricted.

    ``beta`` is the restriction parameter in (0, 1); ``sbar`` the max vector
    norm of the owning spec (the box half-width depends on it).  When a
    restricted domain is requested without an explicit beta, use 0.5: it
    centers the admissible range.
    """

    n: int
    beta: float | None = None
    sbar: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("grid needs n >= 2")
        if self.beta is not None and not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")

    @property
    def parity(self) -> str:
        return "even" if self.n % 2 == 0 else "odd"

    def index_limit(self) -> int | None:
        """J such that the restricted grid keeps |j|, |k| <= J; None if full."""
        if self.beta is None:
            return None
        return beta_index_limit(self.n, self.beta, self.sbar)


DEFAULT_BETA = 0.5


def grid_points(domain: GridDomain) -> Iterator[tuple[int, int, tuple[float, float]]]:
    """Yield (j, k, t_{j,k}) over the domain in row-major order.

    The unrestricted domain yields exactly n^2 - 1 points with each t
    reduced to [-pi, pi); the restricted one yields the sub-box
    |t_j|, |t_k| <= sqrt(5*(1-beta))/sbar.
    """
    n = domain.n
    t = reduced_angles(n)
    limit = domain.index_limit()
    if limit is None:
        for j in range(n):
            for k in range(n):
                if j == 0 and k == 0:
                    continue
                yield j, k, (t[j], t[k])
    else:
        for j in range(n):
            if abs(reduced_index(j, n)) > limit:
                continue
            for k in range(n):
                if j == 0 and k == 0:
                    continue
                if abs(reduced_index(k, n)) <= limit:
                    yield j, k, (t[j], t[k])


# ---------------------------------------------------------------------------
# Kernel evaluations (array-based; the scalar ops wrap these)
# ---------------------------------------------------------------------------

def psi_values(spec: LatticeSpec, x1, x2) -> np.ndarray:
    """psi on arrays of points (broadcasting x1 against x2).

    Within ||x mod 2pi|| < 1 the sin^2 form is used (no cancellation where
    f ~ 1/||x||^2 must stay accurate); elsewhere the cosine form.  Reduction
    uses round-half-to-even on x/(2*pi).
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    shape = np.broadcast_shapes(x1.shape, x2.shape)
    b1 = np.ascontiguousarray(np.broadcast_to(x1, shape)).ravel()
    b2 = np.ascontiguousarray(np.broadcast_to(x2, shape)).ravel()
    r1 = b1 - TWO_PI * np.round(b1 / TWO_PI)
    r2 = b2 - TWO_PI * np.round(b2 / TWO_PI)
    near = (r1 * r1 + r2 * r2) < 1.0
    s1, s2 = spec._s1, spec._s2
    acc = np.zeros_like(b1)
    for i in range(spec.size):
        acc += np.cos(s1[i] * b1 + s2[i] * b2)
    out = 1.0 - acc / spec.size
    if near.any():
        n1, n2 = b1[near], b2[near]
        accn = np.zeros_like(n1)
        for i in range(spec.size):
            sn = np.sin(0.5 * (s1[i] * n1 + s2[i] * n2))
            accn += sn * sn
        out[near] = 2.0 * accn / spec.size
    return out.reshape(shape)


def psi_cos_form(spec: LatticeSpec, x1, x2) -> np.ndarray:
    """psi by the plain cosine form (reference for the dual-form check)."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    acc = 0.0
    for i in range(spec.size):
        acc = acc + np.cos(spec._s1[i] * x1 + spec._s2[i] * x2)
    return 1.0 - acc / spec.size


def psi_sin_form(spec: LatticeSpec, x1, x2) -> np.ndarray:
    """psi by the sin^2 form (reference near the origin)."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    acc = 0.0
    for i in range(spec.size):
        sn = np.sin(0.5 * (spec._s1[i] * x1 + spec._s2[i] * x2))
        acc = acc + sn * sn
    return 2.0 * acc / spec.size


def _taylor_coeffs(m: int) -> np.ndarray:
    # (-1)^{j+1} / (2j)! for j = 1..m
    return np.array([(-1.0) ** (j + 1) / math.factorial(2 * j) for j in range(1, m + 1)])


def pm_values(spec: LatticeSpec, m: int, x1, x2) -> np.ndarray:
    """Taylor truncation p_m on arrays of points."""
    if m < 1:
        raise ValueError("m must be >= 1")
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    shape = np.broadcast_shapes(x1.shape, x2.shape)
    b1 = np.broadcast_to(x1, shape)
    b2 = np.broadcast_to(x2, shape)
    cs = _taylor_coeffs(m)
    s1, s2 = spec._s1, spec._s2
    acc = np.zeros(shape)
    for i in range(spec.size):
        u2 = (s1[i] * b1 + s2[i] * b2) ** 2
        inner = np.full_like(u2, cs[m - 1])
        for j in range(m - 2, -1, -1):
            inner = cs[j] + u2 * inner
        acc += u2 * inner
    return (acc / spec.size).reshape(shape)


# ---------------------------------------------------------------------------
# Scalar operations
# ---------------------------------------------------------------------------

def psi_eval(spec: LatticeSpec, x) -> float:
    """psi at a single point; result in [0, 2]."""
    return float(psi_values(spec, np.array(x[0], dtype=float), np.array(x[1], dtype=float)))


def f_eval(spec: LatticeSpec, x, floor: float = PSI_FLOOR) -> float:
    """f = 1/psi at a single point; raises SingularPoint when psi < floor."""
    p = psi_eval(spec, x)
    if p < floor:
        raise SingularPoint(f"psi({x}) = {p} below floor {floor}")
    return 1.0 / p


def taylor_poly_eval(spec: LatticeSpec, m: int, x) -> float:
    """p_m at a single point."""
    return float(pm_values(spec, m, np.array(x[0], dtype=float), np.array(x[1], dtype=float)))


def fm_eval(spec: LatticeSpec, m: int, x, floor: float = PSI_FLOOR) -> float:
    """f_m = 1/p_m at a single point.

    For m >= 2 the caller must keep ||x|| <= lemma_radius(beta, sbar) for
    some beta in (0, 1); outside it p_m may vanish or go negative, which
    raises SingularPoint here.
    """
    p = taylor_poly_eval(spec, m, x)
    if p < floor:
        raise SingularPoint(f"p_{m}({x}) = {p} below floor {floor}")
    return 1.0 / p
