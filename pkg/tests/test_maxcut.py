from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from anticross.graphs import Graph, generate_complete_bipartite, generate_cycle
from anticross.maxcut import (CostModel, SpectrumError, alpha_T, cut_energy, loc_set,
                              spectrum_stats)

from conftest import brute_energies, grk_model


def test_single_edge(edge_model):
    assert list(edge_model.energies()) == [0, -1]
    st_ = spectrum_stats(edge_model)
    assert (st_.E_gs, st_.E_fs, st_.delta_H1) == (-1, 0, 1)
    assert st_.mean_H1 == Fraction(-1, 2)
    assert st_.ground_config == 1
    assert list(loc_set(edge_model)) == [0]


def test_six_cycle_stats():
    st_ = spectrum_stats(CostModel(generate_cycle(6)))
    assert (st_.E_gs, st_.E_fs, st_.gs_degeneracy) == (-6, -4, 1)
    assert st_.mean_H1 == -3
    a, na = alpha_T(st_, 6)
    assert a == Fraction(2, 3) and na == 4


def test_energies_are_read_only():
    e = CostModel(generate_cycle(4)).energies()
    with pytest.raises(ValueError):
        e[0] = 1


def test_enumeration_cap():
    with pytest.raises(SpectrumError):
        CostModel(generate_cycle(8), enum_cap=5).energies()


def test_constant_cost_rejected():
    with pytest.raises(SpectrumError):
        spectrum_stats(CostModel(Graph(3, ())))


def test_cut_energy_accepts_bits_and_ints():
    m = CostModel(generate_cycle(4))
    assert cut_energy(m, [1, 0, 1]) == cut_energy(m, 0b101) == -4
    with pytest.raises(ValueError):
        cut_energy(m, [1, 0])
    with pytest.raises(ValueError):
        cut_energy(m, 8)


@pytest.mark.parametrize("fixed", [0, 3, 5])
def test_energies_match_brute_force(fixed):
    g = generate_complete_bipartite(3, 3)
    m = CostModel(g, fixed)
    assert list(m.energies()) == brute_energies(g, fixed)


def test_grk_ground_state_is_the_bipartition():
    m = grk_model(3, 3, 2)
    st_ = spectrum_stats(m)
    assert st_.E_gs == -m.graph.n_edges
    assert st_.gs_degeneracy == 1


@st.composite
def graphs_and_fixed(draw):
    n = draw(st.integers(2, 8))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=1, max_size=len(pairs)))
    return Graph(n, tuple(edges)), draw(st.integers(0, n - 1))


@given(graphs_and_fixed())
@settings(max_examples=60, deadline=None)
def test_energy_properties(gf):
    g, fixed = gf
    m = CostModel(g, fixed)
    e = m.energies()
    assert list(e) == brute_energies(g, fixed)
    # pinning halves the mirror-symmetric space; the mean cut is still half the edges
    assert Fraction(int(e.sum()), m.dim) == Fraction(-g.n_edges, 2)
    assert e.max() <= 0 and e.min() >= -g.n_edges
    assert int(e[0]) == 0
