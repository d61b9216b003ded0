"""Undirected simple graphs: storage, graph6 / edge-list I/O, Laplacian."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphFormatError, InfeasibleError

NodePair = tuple[int, int]

GRAPH6_MAX_N = 62


def _pair(u: int, v: int) -> NodePair:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph on nodes ``0..n-1``.

    ``adj`` is a read-only symmetric uint8 matrix, ``links`` the sorted
    upper-triangle pairs.  Build instances with :meth:`from_links` or
    :meth:`from_adjacency`.
    """

    n: int
    adj: np.ndarray = field(repr=False)
    links: tuple[NodePair, ...]

    @classmethod
    def from_adjacency(cls, adj) -> "Graph":
        a = np.array(adj, dtype=np.uint8, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(a)):
            raise ValueError("self-loops are not allowed")
        if np.any(a > 1):
            raise ValueError("adjacency entries must be 0/1")
        a.setflags(write=False)
        us, vs = np.nonzero(np.triu(a, 1))
        links = tuple(sorted(zip(us.tolist(), vs.tolist())))
        return cls(a.shape[0], a, links)

    @classmethod
    def from_links(cls, n: int, links: Iterable[Sequence[int]]) -> "Graph":
        a = np.zeros((n, n), dtype=np.uint8)
        for u, v in links:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"link ({u},{v}) out of range for n={n}")
            a[u, v] = a[v, u] = 1
        return cls.from_adjacency(a)

    @property
    def num_links(self) -> int:
        return len(self.links)

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1, dtype=np.int64)

    def has_link(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.adj, other.adj)

    def __hash__(self) -> int:
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, L={self.num_links})"


def parse_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse ``u v`` lines.  ``#`` starts a comment; an optional first
    non-comment line ``n=<int>`` declares the node count."""
    pairs = []
    declared = n
    seen_data = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not seen_data and line.replace(" ", "").startswith("n="):
            try:
                declared = int(line.replace(" ", "")[2:])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad node count {line!r}") from None
            seen_data = True
            continue
        seen_data = True
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphFormatError(f"line {lineno}: expected two node indices, got {line!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer token in {line!r}") from None
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop at node {u}")
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative node index")
        pairs.append(_pair(u, v))
    if declared is None:
        declared = max((v for _, v in pairs), default=-1) + 1
    for u, v in pairs:
        if v >= declared:
            raise GraphFormatError(f"node index {v} >= declared n={declared}")
    if declared < 1:
        raise GraphFormatError("empty edge list with no node count")
    return Graph.from_links(declared, pairs)


def format_edge_list(g: Graph) -> str:
    lines = [f"n={g.n}"] + [f"{u} {v}" for u, v in g.links]
    return "\n".join(lines) + "\n"


def _upper_index_order(n: int):
    # graph6 bit order: x(0,1), x(0,2), x(1,2), x(0,3), ...
    for j in range(1, n):
        for i in range(j):
            yield i, j


def parse_graph6(line: str) -> Graph:
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphFormatError("empty graph6 string")
    data = [ord(c) - 63 for c in s]
    if any(not 0 <= x <= 63 for x in data):
        raise GraphFormatError(f"graph6 byte outside [63,126] in {s!r}")
    n = data[0]
    if n == 63:
        raise GraphFormatError("unsupported length: extended graph6 header (n > 62)")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    payload = data[1:]
    if len(payload) < nbytes:
        raise GraphFormatError(f"truncated graph6 payload: need {nbytes} bytes, got {len(payload)}")
    if len(payload) > nbytes:
        raise GraphFormatError(f"trailing bytes after graph6 payload in {s!r}")
    bits = [(byte >> (5 - b)) & 1 for byte in payload for b in range(6)]
    adj = np.zeros((n, n), dtype=np.uint8)
    for bit, (i, j) in zip(bits, _upper_index_order(n)):
        if bit:
            adj[i, j] = adj[j, i] = 1
    return Graph.from_adjacency(adj)


def encode_graph6(g: Graph) -> str:
    if g.n > GRAPH6_MAX_N:
        raise ValueError(f"graph6 single-byte header supports n <= {GRAPH6_MAX_N}, got {g.n}")
    bits = [int(g.adj[i, j]) for i, j in _upper_index_order(g.n)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(63 + g.n)]
    for k in range(0, len(bits), 6):
        value = 0
        for b in bits[k:k + 6]:
            value = (value << 1) | b
        out.append(chr(63 + value))
    return "".join(out)


def complement_links(g: Graph) -> list[NodePair]:
    return [(u, v) for u, v in combinations(range(g.n), 2) if not g.adj[u, v]]


def add_links(g: Graph, pairs: Iterable[Sequence[int]]) -> Graph:
    pairs = [tuple(p) for p in pairs]
    if not pairs:
        return g
    a = np.array(g.adj, copy=True)
    seen = set()
    for u, v in pairs:
        if u == v:
            raise InfeasibleError(f"self-loop at node {u}")
        p = _pair(u, v)
        if a[u, v]:
            raise InfeasibleError(f"link {p} already present")
        if p in seen:
            raise InfeasibleError(f"duplicate link {p}")
        seen.add(p)
        a[u, v] = a[v, u] = 1
    return Graph.from_adjacency(a)


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in np.flatnonzero(g.adj[u]):
            if not seen[w]:
                seen[w] = True
                queue.append(int(w))
    return bool(seen.all())


def laplacian(g: Graph) -> np.ndarray:
    """Integer-exact ``Q = D - A`` returned as float64."""
    a = g.adj.astype(np.int64)
    q = np.diag(a.sum(axis=1)) - a
    return q.astype(np.float64)
