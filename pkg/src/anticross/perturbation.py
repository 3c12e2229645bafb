"""Second-order terms of the three perturbative expansions and their size relative to lower order.

The mixer eigenbasis is indexed by bitstrings ``b``: ``|E_b>`` is the
Walsh-Hadamard state with eigenvalue ``-n + 2|b|``. The delocalized expansion
lives in the full node space (no pinning), where the uniform state couples
through the cost function only to ``|b| = 2`` states sitting on an edge.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graphs import Graph
from .locgraph import LocGraph, build_gloc, conductance
from .maxcut import CostModel, fraction_to_json, spectrum_stats

DELOC_ENUM_MAX_NODES = 20


def mixer_eigenvalue(b: int, n: int) -> int:
    """Eigenvalue of ``-sum X`` on the Walsh-Hadamard state indexed by ``b``."""
    return -n + 2 * bin(b).count("1")


def _unpinned_energies(graph: Graph) -> np.ndarray:
    x = np.arange(1 << graph.n_nodes, dtype=np.uint32)
    e = np.zeros(len(x), dtype=np.int64)
    for u, v in graph.edges:
        e -= ((x >> u) ^ (x >> v)) & 1
    return e


def _walsh_hadamard(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    n = len(a)
    h = 1
    while h < n:
        a = a.reshape(-1, 2, h)
        lo, hi = a[:, 0, :].copy(), a[:, 1, :]
        a[:, 0, :] += hi
        a[:, 1, :] = lo - hi
        a = a.reshape(n)
        h *= 2
    return a


def deloc_second_order_enumerated(graph: Graph) -> Fraction:
    """Sum of ``|<E_b|H1|E_0>|^2 / (E_0 - E_b)`` over every ``b != 0`` of the node space."""
    n = graph.n_nodes
    w = _walsh_hadamard(_unpinned_energies(graph))
    # <E_b|H1|E_0> = w[b] / 2^n, and E_0 - E_b = -2|b|
    total = Fraction(0)
    for b in np.flatnonzero(w[1:]) + 1:
        total += Fraction(int(w[b]) ** 2, -2 * bin(int(b)).count("1"))
    return total / (1 << (2 * n))


def deloc_second_order(model: CostModel, enumerate_check: bool = True):
    """``(E2, ratio, enumerated)``: closed form ``-|E|/16``, ratio against ``|<H1>_0|``.

    ``enumerated`` is the independent basis sum (``None`` when skipped or the
    graph exceeds :data:`DELOC_ENUM_MAX_NODES`); a mismatch raises.
    """
    m = model.graph.n_edges
    e2 = Fraction(-m, 16)
    enum = None
    if enumerate_check and model.graph.n_nodes <= DELOC_ENUM_MAX_NODES:
        enum = deloc_second_order_enumerated(model.graph)
        if enum != e2:
            raise AssertionError(f"closed form {e2} disagrees with enumeration {enum}")
    first = Fraction(m, 2)  # |<H1>_0|, half the edges are cut on average
    ratio = abs(e2) / first if first else Fraction(0)
    return e2, ratio, enum


def gs_second_order(model: CostModel):
    """``(E2, ratio)`` for the ground configuration: ``sum 1/(E_gs - E_x)`` over its one-flip neighbours."""
    stats = spectrum_stats(model)
    if stats.gs_degeneracy > 1:
        raise ValueError(f"ground level is {stats.gs_degeneracy}-fold degenerate")
    e = model.energies()
    g = stats.ground_config
    e2 = sum((Fraction(1, stats.E_gs - int(e[g ^ (1 << j)])) for j in range(model.n_qubits)),
             Fraction(0))
    return e2, abs(e2) / abs(stats.E_gs)


def loc_second_order_bound(model: CostModel, locgraph: LocGraph | None = None):
    """``(bound, ratio_bound)``; the ratio is ``None`` when lambda0 vanishes.

    The bound is ``phi(loc) / min |E_fs - E_x|`` over boundary neighbours, a
    heuristic estimate rather than a rigorous inequality.
    """
    locgraph = locgraph if locgraph is not None else build_gloc(model)
    rep = conductance(model, locgraph)
    if rep.second_order_bound is None:
        return None, None
    lam = locgraph.lambda0
    return rep.second_order_bound, (rep.second_order_bound / lam if lam > 0 else None)


@dataclass(frozen=True)
class ValidityReport:
    deloc_E2: Fraction
    deloc_ratio: Fraction
    deloc_enumerated: Fraction | None
    gs_E2: Fraction | None
    gs_ratio: Fraction | None
    loc_E2_bound: float | None
    loc_ratio_bound: float | None
    notes: tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        ratios = [self.deloc_ratio, self.gs_ratio, self.loc_ratio_bound]
        return all(r < 1 for r in ratios if r is not None)

    def to_dict(self) -> dict:
        def fr(x):
            return None if x is None else {**fraction_to_json(x), "float": float(x)}
        return {
            "deloc_E2": fr(self.deloc_E2),
            "deloc_ratio": fr(self.deloc_ratio),
            "deloc_enumerated": fr(self.deloc_enumerated),
            "gs_E2": fr(self.gs_E2),
            "gs_ratio": fr(self.gs_ratio),
            "loc_E2_bound": self.loc_E2_bound,
            "loc_ratio_bound": self.loc_ratio_bound,
            "valid": self.valid,
            "notes": list(self.notes),
        }


def validity_report(model: CostModel, locgraph: LocGraph | None = None,
                    enumerate_check: bool = True) -> ValidityReport:
    notes = []
    d2, dr, denum = deloc_second_order(model, enumerate_check)
    if denum is None:
        notes.append("deloc-enumeration-skipped")
    try:
        g2, gr = gs_second_order(model)
    except ValueError:
        g2 = gr = None
        notes.append("gs-degenerate")
    lb, lr = loc_second_order_bound(model, locgraph)
    if lb is None:
        notes.append("loc-bound-unavailable")
    elif lr is None:
        notes.append("loc-ratio-not-applicable")
    return ValidityReport(d2, dr, denum, g2, gr, lb, lr, tuple(notes))
