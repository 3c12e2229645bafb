import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anticross.graphs import Graph, generate_complete_bipartite, generate_cycle, generate_d4_ladder
from anticross.locgraph import (build_gloc, conductance, export_edge_list, gs_connectivity,
                                largest_adjacency_eigenvalue, _power_lambda0)
from anticross.maxcut import CostModel, loc_set, spectrum_stats

from conftest import grk_model


def _hamming(a, b):
    return bin(int(a) ^ int(b)).count("1")


def test_single_edge_locgraph(edge_model):
    lg = build_gloc(edge_model)
    assert lg.n_vertices == 1 and len(lg.edges) == 0
    assert lg.lambda0 == 0.0
    assert lg.gs_links == 1
    rep = conductance(edge_model, lg)
    assert rep.phi == 1 and rep.boundary_size == 1


def test_six_cycle_locgraph():
    m = CostModel(generate_cycle(6))
    lg = build_gloc(m)
    assert lg.gs_links == 5
    assert lg.deg_max_loc == 4
    assert lg.deg_avg_loc == Fraction(8, 3)
    assert gs_connectivity(m, lg)[0] == 5


def test_edges_are_hamming_one_pairs():
    m = CostModel(generate_cycle(8))
    lg = build_gloc(m)
    v = lg.vertices
    brute = {(i, j) for i in range(len(v)) for j in range(i + 1, len(v)) if _hamming(v[i], v[j]) == 1}
    assert {tuple(map(int, e)) for e in lg.edges} == brute


@pytest.mark.parametrize("r,l,k", [(3, 3, 1), (3, 3, 2), (3, 3, 3), (4, 3, 2)])
def test_grk_major_component_is_lattice(r, l, k):
    lg = build_gloc(grk_model(r, l, k))
    maj = lg.major_component
    assert maj.size == (k + 1) ** 2
    assert maj.deg_avg == 4 * (1 - Fraction(1, k + 1))
    # k = 1 gives a 2x2 grid, i.e. a 4-cycle
    assert maj.deg_max == (2 if k == 1 else 4)
    assert maj.gs_links == 0
    # the (k+1)x(k+1) grid has lambda0 = 4 cos(pi/(k+2))
    assert maj.lambda0 == pytest.approx(4 * np.cos(np.pi / (k + 2)), abs=1e-10)
    assert not lg.major_tie


def test_isolated_loc_boundary():
    m = CostModel(generate_complete_bipartite(3, 3))
    lg = build_gloc(m)
    assert all(c.size == 1 for c in lg.components)
    assert lg.boundary_size == lg.n_vertices * m.n_qubits
    assert "isolated-only-loc" in lg.flags


def test_conductance_brute_force_six_cycle():
    m = CostModel(generate_cycle(6))
    lg = build_gloc(m)
    e = m.energies()
    loc = set(int(x) for x in lg.vertices)
    boundary, gaps = 0, []
    for x in loc:
        for j in range(m.n_qubits):
            y = x ^ (1 << j)
            if y not in loc:
                boundary += 1
                gaps.append(abs(int(e[y]) - int(e[x])))
    rep = conductance(m, lg)
    assert rep.boundary_size == boundary
    assert rep.phi == pytest.approx(boundary / len(loc))
    assert rep.min_outside_gap == min(gaps)
    assert rep.second_order_bound == pytest.approx(boundary / len(loc) / min(gaps))


def test_power_iteration_matches_dense():
    m = CostModel(generate_d4_ladder(3))
    lg = build_gloc(m)
    adj = lg.adjacency()
    maj = lg.major_component
    sub = adj[maj.vertices][:, maj.vertices]
    dense = np.linalg.eigvalsh(sub.toarray())[-1]
    assert _power_lambda0(sub.tocsr()) == pytest.approx(dense, rel=1e-10)
    assert largest_adjacency_eigenvalue(sub) == pytest.approx(dense, rel=1e-12)


def test_export_edge_list(tmp_path):
    lg = build_gloc(grk_model(3, 3, 2))
    export_edge_list(lg, tmp_path / "loc.txt", tmp_path / "loc.json")
    from anticross.graphs import read_edge_list
    g = read_edge_list(tmp_path / "loc.txt")
    assert g.n_edges == len(lg.edges)
    mapping = json.loads((tmp_path / "loc.json").read_text())
    assert mapping["configs"] == [int(v) for v in lg.vertices]


@st.composite
def bipartite_graphs(draw):
    a = draw(st.integers(1, 4))
    b = draw(st.integers(1, 4))
    pairs = [(i, a + j) for i in range(a) for j in range(b)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=1, max_size=len(pairs)))
    return Graph(a + b, tuple(edges))


@given(bipartite_graphs())
@settings(max_examples=80, deadline=None)
def test_locgraph_invariants(g):
    m = CostModel(g)
    lg = build_gloc(m)
    internal = np.zeros(lg.n_vertices, dtype=int)
    for i, j in lg.edges:
        internal[i] += 1
        internal[j] += 1
    # every hypercube neighbour of a Loc vertex is either internal or on the boundary
    assert int(internal.sum()) + lg.boundary_size == lg.n_vertices * m.n_qubits
    maj = lg.major_component
    assert maj.deg_avg - 1e-8 <= lg.lambda0 <= maj.deg_max + 1e-8
    assert sorted(int(x) for x in lg.vertices) == sorted(int(x) for x in loc_set(m))
    gs = spectrum_stats(m).ground_config
    assert lg.gs_links == sum(_hamming(v, gs) == 1 for v in lg.vertices)
