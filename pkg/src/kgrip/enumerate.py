"""Isomorph-free enumeration of small connected graphs.

Canonical form of a graph: the lexicographically smallest upper-triangle
bit string (graph6 column order) over all relabelings.  Graphs with ``L``
links are generated level by level: every graph on ``L`` links is some
graph on ``L - 1`` links plus one link, so canonicalizing all one-link
extensions of the previous level yields each isomorphism class exactly once.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import InfeasibleError
from .graph import Graph, is_connected

MAX_BUILTIN_N = 7


def _columns(n):
    return [(i, j) for j in range(1, n) for i in range(j)]


def canonical_key(g: Graph) -> int:
    """Integer whose ``n(n-1)/2``-bit binary expansion is the canonical string."""
    return _kernels.canonical_key(g.adj)


def canonical_string(g: Graph) -> str:
    nbits = g.n * (g.n - 1) // 2
    return format(canonical_key(g), f"0{nbits}b") if nbits else ""


def graph_from_key(n: int, key: int) -> Graph:
    cols = _columns(n)
    nbits = len(cols)
    adj = np.zeros((n, n), dtype=np.uint8)
    for idx, (i, j) in enumerate(cols):
        if (key >> (nbits - 1 - idx)) & 1:
            adj[i, j] = adj[j, i] = 1
    return Graph.from_adjacency(adj)


def canonical_graph(g: Graph) -> Graph:
    return graph_from_key(g.n, canonical_key(g))


@lru_cache(maxsize=None)
def _all_graph_keys(n: int) -> tuple[tuple[int, ...], ...]:
    """Canonical keys of every graph on ``n`` nodes, grouped by link count."""
    cols = _columns(n)
    nbits = len(cols)
    levels = [(0,)]
    for _ in range(nbits):
        nxt = set()
        for key in levels[-1]:
            adj = np.zeros((n, n), dtype=np.int64)
            for idx, (i, j) in enumerate(cols):
                if (key >> (nbits - 1 - idx)) & 1:
                    adj[i, j] = adj[j, i] = 1
            for i, j in cols:
                if adj[i, j]:
                    continue
                adj[i, j] = adj[j, i] = 1
                nxt.add(_kernels.canonical_key(adj))
                adj[i, j] = adj[j, i] = 0
        levels.append(tuple(sorted(nxt)))
    return tuple(levels)


@lru_cache(maxsize=None)
def _connected(n: int) -> tuple[Graph, ...]:
    out = []
    for level in _all_graph_keys(n):
        for key in level:
            g = graph_from_key(n, key)
            if is_connected(g):
                out.append(g)
    return tuple(out)


def enumerate_connected_graphs(n: int) -> list[Graph]:
    """One canonical representative per isomorphism class of connected
    graphs on ``n`` nodes, ordered by (link count, canonical string)."""
    if not 2 <= n <= MAX_BUILTIN_N:
        raise InfeasibleError(
            f"built-in enumeration supports 2 <= n <= {MAX_BUILTIN_N}; "
            "use graph6 ingestion for larger catalogs")
    return list(_connected(n))
