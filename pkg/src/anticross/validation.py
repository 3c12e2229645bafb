"""Input coercion shared by the estimator facade and the CLI."""
from __future__ import annotations

import os

from .graphs import Graph, GraphError, parse_edge_list, read_edge_list


def check_graph(obj) -> Graph:
    """Coerce ``obj`` to a :class:`Graph`.

    Accepts a Graph, a networkx-like graph (nodes relabelled to ``0..n-1``
    in sorted order), edge-list text containing newlines, a path to an
    edge-list file, or an iterable of ``(u, v)`` pairs.
    """
    if isinstance(obj, Graph):
        return obj
    if hasattr(obj, "nodes") and hasattr(obj, "edges"):
        nodes = sorted(obj.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return Graph(len(nodes), tuple((index[u], index[v]) for u, v in obj.edges()))
    if isinstance(obj, (str, os.PathLike)):
        if isinstance(obj, str) and "\n" in obj:
            return parse_edge_list(obj)
        return read_edge_list(obj)
    try:
        return Graph.from_edges(obj)
    except TypeError as exc:
        raise GraphError(f"cannot interpret {type(obj).__name__} as a graph") from exc


def check_graphs(X) -> list[Graph]:
    """A single graph or a sequence of graphs, as a list."""
    if isinstance(X, Graph) or hasattr(X, "nodes"):
        return [check_graph(X)]
    return [check_graph(x) for x in X]


def check_unit_interval(values, name="s") -> list[float]:
    out = [float(v) for v in values]
    bad = [v for v in out if not 0.0 <= v <= 1.0]
    if bad:
        raise ValueError(f"{name} values must lie in [0, 1], got {bad[:3]}")
    return out


def check_positive(values, name="t_max") -> list[float]:
    out = [float(v) for v in values]
    bad = [v for v in out if not v > 0]
    if bad:
        raise ValueError(f"{name} values must be positive, got {bad[:3]}")
    return out
