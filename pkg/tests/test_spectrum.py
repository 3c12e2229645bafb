import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anticross.graphs import Graph, generate_cycle
from anticross.maxcut import CostModel, spectrum_stats
from anticross.spectrum import (AnnealHamiltonian, EigenSolverError, dense_hamiltonian, gap_scan,
                                golden_section_min, lanczos_lowest, lowest_two, scaling_fit,
                                variational_bound)

from conftest import grk_model


def edge_gap(s):
    return math.sqrt(5 * s * s - 8 * s + 4)


def test_matvec_matches_dense():
    m = CostModel(generate_cycle(6))
    ham = AnnealHamiltonian(m)
    v = np.random.default_rng(1).standard_normal(ham.dim)
    for s in (0.0, 0.3, 1.0):
        assert np.allclose(ham.apply(s, v), dense_hamiltonian(m, s) @ v, atol=1e-12)


def test_matvec_complex_and_shape_check():
    ham = AnnealHamiltonian(CostModel(generate_cycle(4)))
    v = np.random.default_rng(2).standard_normal(ham.dim) * (1 + 2j)
    assert np.allclose(ham.apply(0.4, v), (1 + 2j) * ham.apply(0.4, v.real / 1), atol=1e-12)
    with pytest.raises(ValueError):
        ham.apply(0.4, np.ones(3))


def test_qubit_limit():
    with pytest.raises(ValueError):
        AnnealHamiltonian(CostModel(generate_cycle(8)), max_qubits=5)


def test_single_qubit_gap_closed_form(edge_model):
    ham = AnnealHamiltonian(edge_model)
    for s in np.linspace(0, 1, 11):
        assert lowest_two(ham, s).gap == pytest.approx(edge_gap(s), abs=1e-12)


def test_lanczos_general_symmetric():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((300, 300))
    a = a + a.T
    res = lanczos_lowest(lambda v: a @ v, 300, nev=3, tol=1e-10, max_krylov=40)
    assert np.allclose(res.values, np.linalg.eigvalsh(a)[:3], atol=1e-8)


def test_lanczos_escapes_symmetric_start():
    # the uniform vector is an eigenvector of H(0); the second level must still be found
    m = CostModel(generate_cycle(8))
    ham = AnnealHamiltonian(m)
    sol = lowest_two(ham, 0.0, v0=np.ones(ham.dim))
    assert sol.e0 == pytest.approx(-m.n_qubits, abs=1e-10)
    assert sol.e1 == pytest.approx(-m.n_qubits + 2, abs=1e-10)


def test_endpoints():
    m = grk_model(3, 3, 1)
    ham = AnnealHamiltonian(m)
    st_ = spectrum_stats(m)
    end = lowest_two(ham, 1.0)
    assert end.e0 == pytest.approx(st_.E_gs, abs=1e-9)
    assert end.e1 == pytest.approx(st_.E_fs, abs=1e-9)
    assert lowest_two(ham, 0.0).gap == pytest.approx(2.0, abs=1e-9)


def test_degenerate_ground_at_end():
    ham = AnnealHamiltonian(CostModel(Graph(3, ((0, 1), (0, 2), (1, 2)))))
    with pytest.raises(EigenSolverError):
        lowest_two(ham, 1.0)


def test_s_out_of_range(edge_model):
    with pytest.raises(ValueError):
        lowest_two(AnnealHamiltonian(edge_model), 1.5)


def test_golden_section():
    x, fx, n = golden_section_min(lambda s: (s - 0.3) ** 2, 0.0, 1.0, tol=1e-6)
    assert x == pytest.approx(0.3, abs=1e-6)
    assert n < 60


def test_gap_scan_single_edge(tmp_path, edge_model):
    scan = gap_scan(AnnealHamiltonian(edge_model), grid_points=11)
    assert scan.s_min == pytest.approx(0.8, abs=1e-4)
    assert scan.gap_min == pytest.approx(2 / math.sqrt(5), abs=1e-9)
    assert scan.gap[0] == pytest.approx(2.0)
    path = tmp_path / "scan.csv"
    scan.write_csv(path, {"seed": 0})
    lines = path.read_text().splitlines()
    assert lines[0] == '# config: {"seed": 0}'
    assert lines[1] == "s,e0,e1,gap"
    assert len(lines) == 13
    assert lines[2].split(",")[0] == "0"


def test_gap_scan_needs_two_points(edge_model):
    with pytest.raises(ValueError):
        gap_scan(AnnealHamiltonian(edge_model), grid_points=1)


def test_scaling_fit():
    pts = [(r, 3.0 * math.exp(-0.7 * r)) for r in (3, 4, 5)]
    fit = scaling_fit(pts)
    assert fit.rate == pytest.approx(0.7)
    assert fit.prefactor == pytest.approx(3.0)
    assert fit.r_squared == pytest.approx(1.0)
    with pytest.raises(ValueError):
        scaling_fit(pts[:2])
    with pytest.raises(ValueError):
        scaling_fit([(1, 1.0), (2, 0.0), (3, 0.5)])


@st.composite
def graphs(draw):
    n = draw(st.integers(2, 7))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=1, max_size=len(pairs)))
    return Graph(n, tuple(edges))


@given(graphs(), st.floats(0.0, 0.999))
@settings(max_examples=60, deadline=None)
def test_lanczos_matches_dense_and_variational_bound(g, s):
    m = CostModel(g)
    sol = lowest_two(AnnealHamiltonian(m), s)
    ev = np.linalg.eigvalsh(dense_hamiltonian(m, s))
    assert sol.e0 == pytest.approx(ev[0], abs=1e-8)
    assert sol.e1 == pytest.approx(ev[1], abs=1e-8)
    assert sol.e0 <= float(variational_bound(m, s)) + 1e-9
    assert abs(np.linalg.norm(sol.vec0) - 1) < 1e-10
    assert abs(sol.vec0 @ sol.vec1) < 1e-8
