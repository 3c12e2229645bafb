import itertools

import pytest

from anticross.graphs import Graph, GrkParams, generate_grk, grk_layout
from anticross.maxcut import CostModel


def grk_model(r, l, k):
    p = GrkParams(r, l, k)
    return CostModel(generate_grk(p), grk_layout(p)["ll_left"][0])


def brute_energies(graph: Graph, fixed: int = 0) -> list[int]:
    """Cut energies by direct side assignment, indexed like CostModel configurations."""
    free = [v for v in range(graph.n_nodes) if v != fixed]
    out = []
    for x in range(1 << len(free)):
        side = {fixed: 0}
        for i, v in enumerate(free):
            side[v] = (x >> i) & 1
        out.append(-sum(side[u] != side[v] for u, v in graph.edges))
    return out


def connected_graphs(n):
    """Every connected labelled graph on ``n`` nodes (small n only)."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1, 1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if (mask >> i) & 1]
        seen, stack = {0}, [0]
        adj = {v: [] for v in range(n)}
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) == n:
            yield Graph(n, tuple(edges))


@pytest.fixture
def edge_model():
    return CostModel(Graph(2, ((0, 1),)))


# ---------------------------------------------------------------- acceptance report

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, title, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {title} | {detail}")
