"""Doubly periodic lattice graphs and their Laplacian invariants.

A lattice spec and a modulus n define a graph on the n x n torus: vertex
(u, v) connects to (u, v) +- s_l mod n for every root vector.  Its
Laplacian L = (2L) I - A diagonalizes in the Fourier basis with eigenvalues
2L * psi(t_{j,k}), so the pseudoinverse trace is the lattice sum F_n
divided by twice the vector count.  The explicit-matrix eigensolve is kept
as the independent check of that identity.

The spanning-tree-related tau constant and the Kirchhoff index follow from
tr(L^+) for regular graphs without multi-edges; generator collisions mod n
(which would create multi-edges or loops) are rejected at construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateGraph
from .lattice import LatticeSpec, psi_values, reduced_angles
from .sums import neumaier_row_sums, neumaier_sum

#: hard cap on the explicit-matrix eigensolve (nu = n^2 vertices)
DENSE_VERTEX_CAP = 65536


@dataclass(frozen=True)
class TorusGraph:
    spec: LatticeSpec
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("torus graph needs n >= 2")
        offsets = self.offsets
        if (0, 0) in offsets:
            raise DegenerateGraph(f"generator collapses to a self loop mod {self.n}")
        if len(set(offsets)) != len(offsets):
            raise DegenerateGraph(
                f"generators collide mod {self.n}; graph would have multi-edges"
            )

    @cached_property
    def offsets(self) -> tuple[tuple[int, int], ...]:
        n = self.n
        out = []
        for v in self.spec.vectors:
            out.append((v[0] % n, v[1] % n))
            out.append(((-v[0]) % n, (-v[1]) % n))
        return tuple(out)

    @property
    def vertex_count(self) -> int:
        return self.n * self.n

    @property
    def degree(self) -> int:
        return 2 * self.spec.size


def trace_pseudoinverse_spectral(g: TorusGraph) -> float:
    """tr(L^+) from the closed-form eigenvalues 2L psi(t_{j,k}).

    Equals F_n / (2 L) by construction; the zero eigenvalue at (j,k)=(0,0)
    is excluded.
    """
    t = reduced_angles(g.n)
    lam = 2.0 * g.spec.size * psi_values(g.spec, t[:, None], t[None, :])
    lam[0, 0] = np.inf
    rows = neumaier_row_sums(1.0 / lam)
    return neumaier_sum(rows)


def laplacian_matrix(g: TorusGraph) -> np.ndarray:
    """The explicit nu x nu integer Laplacian (degree minus adjacency)."""
    nu = g.vertex_count
    if nu > DENSE_VERTEX_CAP:
        raise ValueError(
            f"explicit matrix limited to {DENSE_VERTEX_CAP} vertices, got {nu}"
        )
    n = g.n
    idx = np.arange(nu)
    u, v = idx // n, idx % n
    A = np.zeros((nu, nu), dtype=np.int64)
    for du, dv in g.offsets:
        j = ((u + du) % n) * n + (v + dv) % n
        A[idx, j] += 1
    return g.degree * np.eye(nu, dtype=np.int64) - A


def trace_pseudoinverse_dense(g: TorusGraph) -> float:
    """tr(L^+) by dense eigensolve of the explicit matrix (the slow check).

    Verifies that the zero eigenvalue is simple (connected graph) before
    summing reciprocals of the remaining spectrum.
    """
    lap = laplacian_matrix(g).astype(float)
    eig = np.linalg.eigvalsh(lap)
    if eig[1] <= 1e-10 * g.degree:
        raise DegenerateGraph(
            f"second-smallest eigenvalue {eig[1]:.3e}; graph not connected"
        )
    return float(np.sum(1.0 / eig[1:]))


def tau_and_kirchhoff(g: TorusGraph) -> tuple[float, float]:
    """(tau constant, Kirchhoff index) of the torus graph.

    tau(G) = (1/12)(1 - 2(nu-1)/(d nu))^2 + tr(L^+)/nu and
    Kf(G) = nu tr(L^+), for d-regular graphs with equal edge lengths and no
    multi-edges, bridges, or self loops.  Equi-resistance is assumed, not
    checked.
    """
    nu = g.vertex_count
    d = g.degree
    trace = trace_pseudoinverse_spectral(g)
    base = (1.0 - 2.0 * (nu - 1) / (d * nu)) ** 2 / 12.0
    return base + trace / nu, nu * trace
