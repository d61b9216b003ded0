"""Exhaustive submodularity ratio / curvature on small ground sets, greedy
guarantee factors, and the search for minimal non-submodularity witnesses.

All set functions are evaluated through the Kirchhoff index ``R``.  The
normalized resistance is an affine, decreasing function of ``R``, so every
ratio of its differences equals the corresponding ratio of ``R`` drops.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .enumerate import enumerate_connected_graphs
from .errors import BudgetExceededError, InfeasibleError
from .graph import Graph, NodePair, add_links, complement_links, encode_graph6, is_connected, laplacian
from .resistance import apply_link, link_gain, link_gains, resistance_state

DEFAULT_GROUND_CAP = 12
GAIN_TOL = 1e-12


@dataclass(frozen=True)
class Triple:
    S: tuple[NodePair, ...]
    R: tuple[NodePair, ...]
    v: NodePair


@dataclass(frozen=True)
class Witness:
    graph: Graph
    v: NodePair
    r_set: tuple[NodePair, ...]
    values: tuple[float, float, float, float]

    @property
    def gain_small(self) -> float:
        return self.values[0] - self.values[1]

    @property
    def gain_large(self) -> float:
        return self.values[2] - self.values[3]

    @property
    def ratio(self) -> float:
        return self.gain_small / self.gain_large

    def to_dict(self) -> dict:
        return {
            "graph": encode_graph6(self.graph),
            "n": self.graph.n,
            "L": self.graph.num_links,
            "v": list(self.v),
            "r_set": [list(p) for p in self.r_set],
            "values": list(self.values),
            "ratio": self.ratio,
        }


@dataclass
class RatioReport:
    gamma: float
    alpha: float
    gamma_raw: float
    alpha_raw: float
    n_triples: int
    ground: list[NodePair]


def triple_count(m: int) -> int:
    return m * 3 ** (m - 1) if m else 0


def _guard(m: int, cap: int):
    if m > cap:
        raise BudgetExceededError(
            f"ground set of {m} links exceeds cap {cap} ({triple_count(m)} triples)",
            count=triple_count(m))


def enumerate_triples(ground: Sequence[NodePair], cap: int = DEFAULT_GROUND_CAP) -> Iterator[Triple]:
    """Every (S, R, v) with S ⊆ R ⊆ ground \\ {v}.

    Each non-``v`` element is independently outside R, in R only, or in S.
    """
    ground = [tuple(p) for p in ground]
    _guard(len(ground), cap)
    for vi, v in enumerate(ground):
        others = ground[:vi] + ground[vi + 1:]
        for states in product((0, 1, 2), repeat=len(others)):
            S = tuple(e for e, s in zip(others, states) if s == 2)
            R = tuple(e for e, s in zip(others, states) if s >= 1)
            yield Triple(S, R, v)


def subset_values(g: Graph, ground: Sequence[NodePair]) -> np.ndarray:
    """Kirchhoff index of ``g`` plus every subset of ``ground``, indexed by bitmask
    (bit ``e`` set means ``ground[e]`` is added)."""
    p = np.asarray(ground, dtype=np.int64).reshape(-1, 2)
    return _kernels.powerset_values(laplacian(g), p[:, 0].copy(), p[:, 1].copy())


def ratio_report(g: Graph, ground: Sequence[NodePair] | None = None,
                 cap: int = DEFAULT_GROUND_CAP, tol: float = GAIN_TOL) -> RatioReport:
    """Submodularity ratio and curvature by exhaustive enumeration.

    Both scan all nested pairs ``small ⊆ big ⊆ ground \\ {v}``.  The ratio is
    ``min gain(small)/gain(big)``; the curvature is ``max 1 - gain(big)/gain(small)``
    (any ``S ∋ v`` and ``Ω`` reduce to ``small = S \\ v``, ``big = small ∪ Ω``).
    Pairs whose denominator gain is below ``tol * R(g)`` are skipped.
    """
    if g.n < 2 or not is_connected(g):
        raise InfeasibleError("graph must be connected")
    ground = complement_links(g) if ground is None else [tuple(p) for p in ground]
    m = len(ground)
    _guard(m, cap)
    if m == 0:
        return RatioReport(1.0, 0.0, math.nan, math.nan, 0, ground)
    f = subset_values(g, ground)
    gamma_raw, alpha_raw, count = _kernels.pair_extrema(f, m, tol * abs(f[0]))
    gamma = 1.0 if math.isnan(gamma_raw) else min(1.0, max(0.0, gamma_raw))
    alpha = 0.0 if math.isnan(alpha_raw) else min(1.0, max(0.0, alpha_raw))
    return RatioReport(gamma, alpha, float(gamma_raw), float(alpha_raw), int(count), ground)


def submodularity_ratio(g: Graph, ground=None, cap: int = DEFAULT_GROUND_CAP) -> float:
    return ratio_report(g, ground, cap).gamma


def curvature(g: Graph, ground=None, cap: int = DEFAULT_GROUND_CAP) -> float:
    return ratio_report(g, ground, cap).alpha


def guarantee_factor(gamma: float, alpha: float, which: str = "bian") -> float:
    """Greedy approximation factor from submodularity ratio and curvature.

    ``bian``: (1/alpha)(1 - exp(-gamma*alpha)), tending to gamma as alpha -> 0.
    ``liu``:  1 - (1 - gamma + gamma*alpha) exp(-gamma).
    """
    if not (0.0 <= gamma <= 1.0 and 0.0 <= alpha <= 1.0):
        raise ValueError("gamma and alpha must lie in [0, 1]")
    if which == "bian":
        if alpha < 1e-12:
            return gamma
        return -math.expm1(-gamma * alpha) / alpha
    if which == "liu":
        return 1.0 - (1.0 - gamma + gamma * alpha) * math.exp(-gamma)
    raise ValueError(f"unknown bound {which!r}")


@dataclass
class WitnessSearch:
    witness: Witness | None
    # (n, L) classes scanned without finding any violation
    clean_classes: list[tuple[int, int]]
    graphs_scanned: int


def _scan_graph(g: Graph, tol: float):
    """Minimum gain ratio over (v, r) pairs of non-links; None if no violation."""
    ground = complement_links(g)
    if len(ground) < 2:
        return None
    base = resistance_state(g)
    g1 = link_gains(base, ground)
    best = None
    for ri, r in enumerate(ground):
        after_r = apply_link(base, *r)
        for vi, v in enumerate(ground):
            if vi == ri:
                continue
            g2 = link_gain(after_r, *v)
            if g2 <= 0:
                continue
            ratio = g1[vi] / g2
            if ratio < 1.0 - tol and (best is None or ratio < best[0] - tol):
                best = (ratio, v, r)
    return best


def find_witness(max_nodes: int, tol: float = 1e-9) -> WitnessSearch:
    """Smallest graph (by node count, then link count) on which adding a single
    link ``v`` gains more after another link ``r`` is added than before.

    Within the first (n, L) class that contains a violation, the witness with
    the smallest gain ratio is returned (first in catalog order on ties).
    """
    clean = []
    scanned = 0
    for n in range(2, max_nodes + 1):
        graphs = enumerate_connected_graphs(n)
        by_links: dict[int, list[Graph]] = {}
        for g in graphs:
            by_links.setdefault(g.num_links, []).append(g)
        for L in sorted(by_links):
            best = None
            for g in by_links[L]:
                scanned += 1
                hit = _scan_graph(g, tol)
                if hit is not None and (best is None or hit[0] < best[0] - tol):
                    best = (hit[0], g, hit[1], hit[2])
            if best is None:
                clean.append((n, L))
                continue
            _, g, v, r = best
            values = (
                resistance_state(g).r_total,
                resistance_state(add_links(g, [v])).r_total,
                resistance_state(add_links(g, [r])).r_total,
                resistance_state(add_links(g, [r, v])).r_total,
            )
            return WitnessSearch(Witness(g, v, (r,), values), clean, scanned)
    return WitnessSearch(None, clean, scanned)
