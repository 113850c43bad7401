"""Torus graphs: spectra, pseudoinverse traces, and the invariants."""

import math

import numpy as np
import pytest

from latticesum.errors import DegenerateGraph
from latticesum.graph import (
    DENSE_VERTEX_CAP,
    TorusGraph,
    laplacian_matrix,
    tau_and_kirchhoff,
    trace_pseudoinverse_dense,
    trace_pseudoinverse_spectral,
)
from latticesum.lattice import SQUARE, TRIANGULAR, UNIONJACK, LatticeSpec
from latticesum.sums import fn_direct

ALL_SPECS = (SQUARE, TRIANGULAR, UNIONJACK)


def test_degenerate_small_modulus():
    # (1,1) and (1,-1) coincide mod 2; +-(1,0) collide mod 2 as well
    with pytest.raises(DegenerateGraph):
        TorusGraph(UNIONJACK, 2)
    with pytest.raises(DegenerateGraph):
        TorusGraph(SQUARE, 2)


def test_degenerate_self_loop():
    spec = LatticeSpec([(1, 0), (0, 1), (0, 3)])
    with pytest.raises(DegenerateGraph):
        TorusGraph(spec, 3)


def test_graph_metadata():
    g = TorusGraph(UNIONJACK, 5)
    assert g.vertex_count == 25
    assert g.degree == 8
    assert len(g.offsets) == 8


def test_laplacian_rows_sum_to_zero():
    for spec in ALL_SPECS:
        g = TorusGraph(spec, 6)
        lap = laplacian_matrix(g)
        assert lap.dtype == np.int64
        sums = lap.sum(axis=1)
        assert sums.min() == 0 and sums.max() == 0


def test_spectral_equals_dense_and_lattice_sum():
    for spec in ALL_SPECS:
        for n in range(3, 25):
            try:
                g = TorusGraph(spec, n)
            except DegenerateGraph:
                continue
            ts = trace_pseudoinverse_spectral(g)
            td = trace_pseudoinverse_dense(g)
            fv = fn_direct(spec, n).value / (2 * spec.size)
            assert abs(ts - td) <= 1e-9 * ts
            assert abs(ts - fv) <= 1e-9 * ts


def test_zero_eigenvalue_simple():
    for spec in ALL_SPECS:
        g = TorusGraph(spec, 8)
        lap = laplacian_matrix(g).astype(float)
        eig = np.linalg.eigvalsh(lap)
        assert abs(eig[0]) < 1e-9
        assert eig[1] > 1e-10 * g.degree


def test_tau_and_kirchhoff_identities():
    g = TorusGraph(SQUARE, 3)
    tau, kf = tau_and_kirchhoff(g)
    F3 = fn_direct(SQUARE, 3).value
    expect = (1.0 - 2.0 * 8 / (4 * 9)) ** 2 / 12.0 + F3 / (4 * 9)
    assert tau == pytest.approx(expect, rel=1e-14)
    # Kf/nu^2 equals tr/nu to 2 ulp by construction
    trace = trace_pseudoinverse_spectral(g)
    lhs = kf / g.vertex_count**2
    rhs = trace / g.vertex_count
    assert abs(lhs - rhs) <= 2 * np.spacing(abs(rhs))


def test_tau_log_growth_trend():
    # tau minus its combinatorial base grows like log(n)/(2 pi sqrt(det))
    g = TorusGraph(SQUARE, 64)
    tau, _ = tau_and_kirchhoff(g)
    base = (1.0 - 2.0 * (64**2 - 1) / (4 * 64**2)) ** 2 / 12.0
    ratio = (tau - base) / (math.log(64) / (2 * math.pi))
    assert 0.8 <= ratio <= 1.3


def test_dense_cap():
    g = TorusGraph(SQUARE, 300)  # construction fine, matrix too large
    assert g.vertex_count > DENSE_VERTEX_CAP
    with pytest.raises(ValueError):
        laplacian_matrix(g)
    # analytic path still works
    assert trace_pseudoinverse_spectral(g) > 0
