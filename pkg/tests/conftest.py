from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from kgrip.graph import Graph, is_connected


def path(n):
    return Graph.from_links(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_links(n, [(i, (i + 1) % n) for i in range(n)])


def star(n):
    return Graph.from_links(n, [(0, i) for i in range(1, n)])


def complete(n):
    return Graph.from_links(n, combinations(range(n), 2))


def exact_kirchhoff(n, links):
    """Kirchhoff index in exact rationals: n * tr((Q + J/n)^-1) - n by Gauss-Jordan."""
    a = [[Fraction(1, n)] * n for _ in range(n)]
    for u, v in links:
        a[u][u] += 1
        a[v][v] += 1
        a[u][v] -= 1
        a[v][u] -= 1
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        inv[c], inv[p] = inv[p], inv[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        inv[c] = [x / piv for x in inv[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[c])]
    return n * sum(inv[i][i] for i in range(n)) - n


def random_connected(rng, n, p=0.5):
    while True:
        a = np.triu((rng.random((n, n)) < p).astype(np.uint8), 1)
        g = Graph.from_adjacency(a + a.T)
        if is_connected(g):
            return g


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
