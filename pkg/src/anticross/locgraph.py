"""The local-minima graph: first excited configurations as an induced subgraph of the hypercube."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import connected_components

from .maxcut import CostModel, SpectrumError, loc_set, spectrum_stats

DEFAULT_LOC_CAP = 2_000_000
DENSE_MAX = 64
TIE_TOL = 1e-8


@dataclass(frozen=True)
class Component:
    vertices: np.ndarray  # positions into LocGraph.vertices
    n_edges: int
    lambda0: float
    deg_max: int
    deg_avg: Fraction
    gs_links: int

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True, eq=False)
class LocGraph:
    n_qubits: int
    vertices: np.ndarray  # packed configurations, ascending
    edges: np.ndarray  # (m, 2) positions into ``vertices``, i < j
    labels: np.ndarray  # component label per vertex
    components: tuple[Component, ...]
    major: int | None  # index into components; None when empty
    major_tie: bool
    deg_max_loc: int
    deg_avg_loc: Fraction
    gs_links: int
    boundary_size: int
    flags: tuple[str, ...] = field(default=())

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def lambda0(self) -> float:
        return 0.0 if self.major is None else self.components[self.major].lambda0

    @property
    def major_component(self) -> Component | None:
        return None if self.major is None else self.components[self.major]

    @property
    def conductance(self) -> float:
        return self.boundary_size / self.n_vertices if self.n_vertices else 0.0

    def adjacency(self) -> csr_matrix:
        m = self.n_vertices
        i, j = self.edges[:, 0], self.edges[:, 1]
        a = coo_matrix((np.ones(len(i)), (i, j)), shape=(m, m))
        return (a + a.T).tocsr()

    def summary(self) -> dict:
        maj = self.major_component
        out = {
            "n_vertices": self.n_vertices,
            "n_edges": int(len(self.edges)),
            "n_components": len(self.components),
            "n_isolated": int(sum(c.size == 1 for c in self.components)),
            "lambda0": self.lambda0,
            "deg_max_loc": self.deg_max_loc,
            "deg_avg_loc": {"num": self.deg_avg_loc.numerator, "den": self.deg_avg_loc.denominator},
            "gs_links": self.gs_links,
            "boundary_size": self.boundary_size,
            "conductance": self.conductance,
            "major_tie": self.major_tie,
            "flags": list(self.flags),
        }
        if maj is not None:
            out["major"] = {
                "size": maj.size,
                "n_edges": maj.n_edges,
                "lambda0": maj.lambda0,
                "deg_max": maj.deg_max,
                "deg_avg": {"num": maj.deg_avg.numerator, "den": maj.deg_avg.denominator},
                "gs_links": maj.gs_links,
            }
        return out


def _power_lambda0(adj: csr_matrix, tol: float = 1e-10, max_iter: int = 100_000,
                   seed: int = 0) -> float:
    # G_loc is bipartite, so -lambda0 is also an eigenvalue; shift by the
    # max degree to make lambda0 strictly dominant.
    deg = np.asarray(adj.sum(axis=1)).ravel()
    shift = float(deg.max())
    rng = np.random.default_rng(seed)
    v = rng.random(adj.shape[0]) + 0.5
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = adj @ v + shift * v
        lam_new = float(v @ w) - shift
        v = w / np.linalg.norm(w)
        resid = np.linalg.norm(adj @ v - (float(v @ (adj @ v))) * v)
        if abs(lam_new - lam) <= tol * max(1.0, abs(lam_new)) and resid <= 1e-6 * max(1.0, lam_new):
            return float(v @ (adj @ v))
        lam = lam_new
    warnings.warn("power iteration did not converge; returning last Rayleigh quotient")
    return float(v @ (adj @ v))


def largest_adjacency_eigenvalue(adj) -> float:
    """Largest eigenvalue of a symmetric 0/1 adjacency matrix (dense or sparse)."""
    m = adj.shape[0]
    if m == 0:
        return 0.0
    if m <= DENSE_MAX:
        dense = adj.toarray() if hasattr(adj, "toarray") else np.asarray(adj, dtype=float)
        if not dense.any():
            return 0.0
        return float(np.linalg.eigvalsh(dense)[-1])
    adj = csr_matrix(adj, dtype=float)
    if adj.nnz == 0:
        return 0.0
    return _power_lambda0(adj)


def _popcount(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.uint64)
    c = np.zeros(a.shape, dtype=np.int64)
    while a.any():
        c += (a & np.uint64(1)).astype(np.int64)
        a = a >> np.uint64(1)
    return c


def _hypercube_neighbors(vertices: np.ndarray, n_qubits: int):
    """Yield ``(bit, neighbour configs, position in vertices or -1)`` per bit."""
    m = len(vertices)
    for j in range(n_qubits):
        nb = vertices ^ (1 << j)
        idx = np.searchsorted(vertices, nb)
        idx_c = np.minimum(idx, m - 1)
        hit = vertices[idx_c] == nb
        yield j, nb, np.where(hit, idx_c, -1)


def build_gloc(model: CostModel, loc_cap: int = DEFAULT_LOC_CAP) -> LocGraph:
    stats = spectrum_stats(model)
    verts = loc_set(model)
    nq = model.n_qubits
    m = len(verts)
    if m > loc_cap:
        raise SpectrumError(f"|Loc| = {m} exceeds the cap {loc_cap}")

    ei, ej = [], []
    internal = np.zeros(m, dtype=np.int64)
    for _, _, pos in _hypercube_neighbors(verts, nq):
        found = pos >= 0
        internal += found
        keep = found & (pos > np.arange(m))
        ei.append(np.flatnonzero(keep))
        ej.append(pos[keep])
    ei = np.concatenate(ei) if ei else np.zeros(0, dtype=np.int64)
    ej = np.concatenate(ej) if ej else np.zeros(0, dtype=np.int64)
    edges = np.stack([ei, ej], axis=1) if len(ei) else np.zeros((0, 2), dtype=np.int64)

    adj = coo_matrix((np.ones(len(ei)), (ei, ej)), shape=(m, m))
    adj = (adj + adj.T).tocsr()
    n_comp, labels = connected_components(adj, directed=False)

    gs_adjacent = _popcount(verts ^ stats.ground_config) == 1
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(n_comp + 1))
    comps = []
    for c in range(n_comp):
        idx = order[bounds[c]:bounds[c + 1]]
        if len(idx) == 1:
            comps.append(Component(idx, 0, 0.0, 0, Fraction(0), int(gs_adjacent[idx].sum())))
            continue
        sub = adj[idx][:, idx]
        deg = internal[idx]
        comps.append(Component(
            vertices=idx,
            n_edges=int(deg.sum()) // 2,
            lambda0=largest_adjacency_eigenvalue(sub),
            deg_max=int(deg.max()),
            deg_avg=Fraction(int(deg.sum()), len(idx)),
            gs_links=int(gs_adjacent[idx].sum()),
        ))

    flags = []
    major = None
    tie = False
    if comps:
        # largest lambda0, then most vertices, then lowest vertex label
        key = [(-c.lambda0, -c.size, int(verts[c.vertices].min())) for c in comps]
        major = min(range(len(comps)), key=lambda i: key[i])
        best = comps[major].lambda0
        rivals = [c for i, c in enumerate(comps)
                  if i != major and abs(c.lambda0 - best) <= TIE_TOL * max(1.0, best)]
        tie = bool(rivals)
        if best == 0.0:
            flags.append("isolated-only-loc")
            if m > 2 ** (nq / 2):
                flags.append("many-isolated-minima")
                warnings.warn(f"G_loc has {m} isolated vertices (> 2^(n/2)); "
                              "the no-crossing verdict may be misleading")

    return LocGraph(
        n_qubits=nq,
        vertices=verts,
        edges=edges,
        labels=labels,
        components=tuple(comps),
        major=major,
        major_tie=tie,
        deg_max_loc=int(internal.max()) if m else 0,
        deg_avg_loc=Fraction(int(internal.sum()), m) if m else Fraction(0),
        gs_links=int(gs_adjacent.sum()),
        boundary_size=int(m * nq - internal.sum()),
        flags=tuple(flags),
    )


def lambda0(locgraph: LocGraph) -> tuple[float, list[float]]:
    """Largest adjacency eigenvalue of G_loc and the per-component values."""
    return locgraph.lambda0, [c.lambda0 for c in locgraph.components]


def gs_connectivity(model: CostModel, locgraph: LocGraph) -> tuple[int, list[int]]:
    """Loc vertices one bit-flip from the ground configuration, total and per component."""
    return locgraph.gs_links, [c.gs_links for c in locgraph.components]


@dataclass(frozen=True)
class ConductanceReport:
    phi: float
    boundary_size: int
    min_outside_gap: int | None
    second_order_bound: float | None

    def to_dict(self) -> dict:
        return dict(phi=self.phi, boundary_size=self.boundary_size,
                    min_outside_gap=self.min_outside_gap,
                    second_order_bound=self.second_order_bound)


def conductance(model: CostModel, locgraph: LocGraph) -> ConductanceReport:
    """Boundary of G_loc in the hypercube (ground state included) and the resulting bound."""
    e = model.energies()
    verts = locgraph.vertices
    if len(verts) == 0:
        return ConductanceReport(0.0, 0, None, None)
    e_fs = int(e[verts[0]])
    gap = None
    for _, nb, pos in _hypercube_neighbors(verts, model.n_qubits):
        out = nb[pos < 0]
        if len(out):
            g = int(np.abs(e[out].astype(np.int64) - e_fs).min())
            gap = g if gap is None else min(gap, g)
    phi = locgraph.conductance
    bound = None if gap is None else phi / gap
    return ConductanceReport(phi, locgraph.boundary_size, gap, bound)


def export_edge_list(locgraph: LocGraph, path, mapping_path) -> None:
    """Write G_loc as an edge list on ``0..m-1`` plus a JSON index -> configuration map."""
    with open(path, "w") as fh:
        fh.write(f"# n={max(locgraph.n_vertices, 1)}\n")
        for i, j in locgraph.edges:
            fh.write(f"{int(i)} {int(j)}\n")
    width = locgraph.n_qubits
    mapping = {
        "n_qubits": width,
        "configs": [int(v) for v in locgraph.vertices],
        "bitstrings": [format(int(v), f"0{width}b")[::-1] if width else "" for v in locgraph.vertices],
    }
    with open(mapping_path, "w") as fh:
        json.dump(mapping, fh, indent=1)
