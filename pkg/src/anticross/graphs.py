"""Input graphs: construction, edge-list I/O and structural statistics.

Graphs are small, simple and undirected. Nodes are ``0..n_nodes-1``.
"""
from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator


class GraphError(ValueError):
    """Invalid graph or generator parameter."""


class EdgeListError(GraphError):
    """Malformed edge-list text. ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    n_nodes: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n_nodes < 1:
            raise GraphError("graph needs at least one node")
        canon = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop on node {u}")
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise GraphError(f"edge ({u}, {v}) out of range for {self.n_nodes} nodes")
            canon.append((min(u, v), max(u, v)))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise GraphError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n_nodes: int | None = None) -> "Graph":
        edges = [tuple(e) for e in edges]
        if n_nodes is None:
            n_nodes = 1 + max((max(e) for e in edges), default=-1)
        return cls(n_nodes, tuple(edges))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(x)) for x in nbrs)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    def content_hash(self) -> str:
        """SHA-256 of the canonical edge-list serialization."""
        return hashlib.sha256(serialize_edge_list(self).encode()).hexdigest()

    def __repr__(self):
        return f"Graph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"


@dataclass(frozen=True)
class DegreeStats:
    deg_min: int
    deg_max: int
    deg_avg: Fraction


@dataclass(frozen=True)
class Bipartition:
    is_bipartite: bool
    is_connected: bool
    # 0 = L, 1 = R; None when not bipartite
    side: tuple[int, ...] | None


@dataclass(frozen=True)
class GrkParams:
    r: int
    l: int
    k: int

    def __post_init__(self):
        if self.r < 2 or self.l < 2:
            raise GraphError(f"r and l must be >= 2, got r={self.r}, l={self.l}")
        if self.k < 1:
            raise GraphError(f"k must be >= 1, got {self.k}")

    @property
    def n_nodes(self) -> int:
        return 2 * self.r + 2 * self.l + 2 * self.k


# ---------------------------------------------------------------- statistics

def degree_stats(graph: Graph) -> DegreeStats:
    deg = graph.degrees
    return DegreeStats(min(deg), max(deg), Fraction(2 * graph.n_edges, graph.n_nodes))


def is_regular(graph: Graph) -> int | None:
    """Common degree if every node has the same degree, else ``None``."""
    deg = set(graph.degrees)
    return deg.pop() if len(deg) == 1 else None


def bipartition(graph: Graph) -> Bipartition:
    """Breadth-first 2-colouring; every component starts on side L at its lowest node."""
    side = [-1] * graph.n_nodes
    ok = True
    n_comp = 0
    for root in range(graph.n_nodes):
        if side[root] >= 0:
            continue
        n_comp += 1
        side[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in graph.adjacency[u]:
                if side[v] < 0:
                    side[v] = 1 - side[u]
                    queue.append(v)
                elif side[v] == side[u]:
                    ok = False
    return Bipartition(ok, n_comp == 1, tuple(side) if ok else None)


# ---------------------------------------------------------------- generators

def generate_cycle(n: int) -> Graph:
    if n < 4 or n % 2:
        raise GraphError(f"cycle length must be even and >= 4, got {n}")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def generate_complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b}; nodes ``0..a-1`` on one side, ``a..a+b-1`` on the other."""
    if a < 1 or b < 1:
        raise GraphError(f"both sides of K_(a,b) must be non-empty, got a={a}, b={b}")
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def grk_layout(p: GrkParams) -> dict[str, list[int]]:
    """Node blocks of :func:`generate_grk`.

    Keys: ``rr_left``, ``rr_right``, ``ll_left``, ``ll_right``, ``path1``, ``path2``.
    """
    r, l, k = p.r, p.l, p.k
    o = 2 * r
    base = 2 * r + 2 * l
    return {
        "rr_left": list(range(r)),
        "rr_right": list(range(r, 2 * r)),
        "ll_left": list(range(o, o + l)),
        "ll_right": list(range(o + l, o + 2 * l)),
        "path1": list(range(base, base + k)),
        "path2": list(range(base + k, base + 2 * k)),
    }


def generate_grk(p: GrkParams) -> Graph:
    """Two complete bipartite blocks K_{r,r} and K_{l,l} joined by two parallel paths.

    Each path has ``k`` interior nodes of degree 2. Path ``i`` runs from the
    ``i``-th node of the K_{r,r} right side to the ``i``-th node of the K_{l,l}
    left side. Node order: K_{r,r} (left then right), K_{l,l} (left then right),
    path 1, path 2.
    """
    lay = grk_layout(p)
    edges = [(u, v) for u in lay["rr_left"] for v in lay["rr_right"]]
    edges += [(u, v) for u in lay["ll_left"] for v in lay["ll_right"]]
    for i, path in enumerate((lay["path1"], lay["path2"])):
        chain = [lay["rr_right"][i], *path, lay["ll_left"][i]]
        edges += list(zip(chain, chain[1:]))
    return Graph(p.n_nodes, tuple(edges))


def generate_d4_ladder(k: int) -> Graph:
    """4-regular bipartite graph whose non-isolated local-minima graph is a chain of k+1 squares.

    A tube of ``k+1`` two-node layers, consecutive layers joined by K_{2,2}, is
    closed at each end by a K_{3,4} cap whose four degree-3 nodes take one
    edge each from the two end-layer nodes. The 4-edge cuts across the tube
    (and at the two cap boundaries) are the first excited configurations.
    """
    if k < 1:
        raise GraphError(f"k must be >= 1, got {k}")
    layers = [(7 + 2 * i, 8 + 2 * i) for i in range(k + 1)]
    right = 7 + 2 * (k + 1)

    def cap(offset):
        return [(offset + y, offset + x) for y in range(3) for x in range(3, 7)]

    edges = cap(0) + cap(right)
    for (a, b), o in ((layers[0], 0), (layers[-1], right)):
        edges += [(a, o + 3), (a, o + 4), (b, o + 5), (b, o + 6)]
    for cur, nxt in zip(layers, layers[1:]):
        edges += [(u, v) for u in cur for v in nxt]
    return Graph(right + 7, tuple(edges))


def generate_bipartite_circulant(n: int, jumps: Iterable[int]) -> Graph:
    """Circulant C_n(jumps); bipartite whenever ``n`` is even and all jumps are odd."""
    jumps = sorted(set(int(j) for j in jumps))
    if n < 2 or n % 2:
        raise GraphError(f"n must be even, got {n}")
    if any(j % 2 == 0 or not 0 < j <= n // 2 for j in jumps):
        raise GraphError(f"jumps must be odd and in (0, n/2], got {jumps}")
    edges = {(min(i, (i + j) % n), max(i, (i + j) % n)) for i in range(n) for j in jumps}
    return Graph(n, tuple(sorted(edges)))


def regular_bipartite_graphs(m: int, d: int, connected: bool = True) -> Iterator[Graph]:
    """All d-regular bipartite graphs with ``m`` nodes per side, up to row order.

    Biadjacency matrices are enumerated with rows (as bitmasks) in
    non-increasing order, which removes relabellings of the left side. The
    result still contains isomorphic duplicates but covers every isomorphism
    class. Left nodes are ``0..m-1``, right nodes ``m..2m-1``.
    """
    if not 1 <= d <= m:
        raise GraphError(f"need 1 <= d <= m, got d={d}, m={m}")
    rows_all = sorted((mask for mask in range(1 << m) if bin(mask).count("1") == d), reverse=True)

    def rec(rows, colsum, start):
        if len(rows) == m:
            if all(c == d for c in colsum):
                yield list(rows)
            return
        left = m - len(rows) - 1
        for idx in range(start, len(rows_all)):
            mask = rows_all[idx]
            new = [c + ((mask >> j) & 1) for j, c in enumerate(colsum)]
            # each column must still be able to reach d with the remaining rows
            if any(c > d or c + left < d for c in new):
                continue
            rows.append(mask)
            yield from rec(rows, new, idx)
            rows.pop()

    for rows in rec([], [0] * m, 0):
        edges = tuple((i, m + j) for i, mask in enumerate(rows) for j in range(m) if (mask >> j) & 1)
        g = Graph(2 * m, edges)
        if connected and not bipartition(g).is_connected:
            continue
        yield g


# ---------------------------------------------------------------- edge-list I/O

def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines; optional ``# n=<N>`` header, other ``#`` lines ignored."""
    n_header = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip().replace(" ", "")
            if body.startswith("n="):
                if n_header is not None or edges:
                    raise EdgeListError("node-count header must come first and only once", lineno)
                try:
                    n_header = int(body[2:])
                except ValueError:
                    raise EdgeListError(f"bad node-count header {line!r}", lineno) from None
                if n_header < 1:
                    raise EdgeListError(f"node count must be positive, got {n_header}", lineno)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(f"expected two node indices, got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"non-integer node index in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise EdgeListError(f"negative node index in {line!r}", lineno)
        if u == v:
            raise EdgeListError(f"self-loop on node {u}", lineno)
        if n_header is not None and max(u, v) >= n_header:
            raise EdgeListError(f"node index {max(u, v)} out of range for n={n_header}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListError(f"duplicate edge {key} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        edges.append(key)
    if n_header is None and not edges:
        raise EdgeListError("empty edge list without a node-count header")
    return Graph.from_edges(edges, n_header)


def serialize_edge_list(graph: Graph) -> str:
    lines = [f"# n={graph.n_nodes}"]
    lines += [f"{u} {v}" for u, v in graph.edges]
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> Graph:
    with open(path) as fh:
        return parse_edge_list(fh.read())


def write_edge_list(graph: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(serialize_edge_list(graph))
