"""Greedy and exhaustive link addition minimizing the Kirchhoff index."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import BudgetExceededError, InfeasibleError
from .graph import Graph, NodePair, complement_links, encode_graph6, is_connected, laplacian
from .resistance import (
    apply_link,
    kirchhoff_from_laplacian,
    link_gains,
    resistance_state,
)

TIE_TOL = 1e-12
DEFAULT_SUBSET_BUDGET = 10_000_000
MODES = ("incremental", "naive")


@dataclass(frozen=True)
class GreedyStep:
    pair: NodePair
    delta_r: float
    r_after: float


@dataclass
class GreedyTrace:
    initial_r: float
    mode: str
    steps: list[GreedyStep] = field(default_factory=list)

    @property
    def pairs(self) -> list[NodePair]:
        return [s.pair for s in self.steps]

    @property
    def final_r(self) -> float:
        return self.steps[-1].r_after if self.steps else self.initial_r


@dataclass
class OptimalResult:
    best_set: list[NodePair]
    r_opt: float
    n_evaluated: int


def _placeable(g: Graph, placeable) -> list[NodePair]:
    if placeable is None:
        return complement_links(g)
    out = sorted({(min(u, v), max(u, v)) for u, v in placeable})
    for u, v in out:
        if u == v or not (0 <= u < g.n and 0 <= v < g.n):
            raise InfeasibleError(f"invalid placeable pair ({u},{v})")
        if g.adj[u, v]:
            raise InfeasibleError(f"placeable pair ({u},{v}) is already a link")
    return out


def _check(g: Graph, k: int, pool: Sequence[NodePair]):
    if g.n < 2 or not is_connected(g):
        raise InfeasibleError("graph must be connected with at least two nodes")
    if k < 0:
        raise InfeasibleError("k must be non-negative")
    if k > len(pool):
        raise InfeasibleError(f"k={k} exceeds the {len(pool)} placeable links")


def select_max(gains: np.ndarray, tol: float = TIE_TOL) -> int:
    """Index of the largest gain; ties within ``tol`` relative go to the lowest index."""
    best = float(np.max(gains))
    return int(np.flatnonzero(gains >= best - tol * abs(best))[0])


def greedy(g: Graph, k: int, placeable=None, mode: str = "incremental") -> GreedyTrace:
    """Add ``k`` links one at a time, each maximizing the Kirchhoff index drop.

    ``incremental`` scores candidates with the rank-one gain formula and
    updates the resistance matrix in place of a fresh solve; ``naive``
    recomputes the Kirchhoff index of every candidate graph.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    pool = _placeable(g, placeable)
    _check(g, k, pool)
    if mode == "incremental":
        return _greedy_incremental(g, k, pool)
    return _greedy_naive(g, k, pool)


def _greedy_incremental(g, k, pool):
    state = resistance_state(g)
    trace = GreedyTrace(state.r_total, "incremental")
    pool = list(pool)
    for _ in range(k):
        gains = link_gains(state, pool)
        idx = select_max(gains)
        u, v = pool.pop(idx)
        state = apply_link(state, u, v)
        trace.steps.append(GreedyStep((u, v), float(gains[idx]), state.r_total))
    return trace


def _greedy_naive(g, k, pool):
    q = laplacian(g)
    current = kirchhoff_from_laplacian(q)
    trace = GreedyTrace(current, "naive")
    pool = list(pool)
    for _ in range(k):
        after = np.empty(len(pool))
        for c, (u, v) in enumerate(pool):
            q[u, u] += 1
            q[v, v] += 1
            q[u, v] -= 1
            q[v, u] -= 1
            after[c] = kirchhoff_from_laplacian(q)
            q[u, u] -= 1
            q[v, v] -= 1
            q[u, v] += 1
            q[v, u] += 1
        gains = current - after
        idx = select_max(gains)
        u, v = pool.pop(idx)
        q[u, u] += 1
        q[v, v] += 1
        q[u, v] -= 1
        q[v, u] -= 1
        trace.steps.append(GreedyStep((u, v), float(gains[idx]), float(after[idx])))
        current = float(after[idx])
    return trace


def unrank_combination(index: int, m: int, k: int) -> list[int]:
    """``index``-th k-subset of ``range(m)`` in lexicographic order."""
    out = []
    start = 0
    for slot in range(k):
        for x in range(start, m):
            block = comb(m - x - 1, k - slot - 1)
            if index < block:
                out.append(x)
                start = x + 1
                break
            index -= block
    return out


def brute_force_optimal(g: Graph, k: int, placeable=None,
                        budget: int = DEFAULT_SUBSET_BUDGET) -> OptimalResult:
    """Exact minimizer over all k-subsets of the placeable links.

    Among subsets within ``TIE_TOL`` relative of the minimum, the
    lexicographically smallest one is returned.
    """
    pool = _placeable(g, placeable)
    _check(g, k, pool)
    total = comb(len(pool), k)
    if total > budget:
        raise BudgetExceededError(
            f"C({len(pool)}, {k}) = {total} subsets exceeds budget {budget}", count=total)
    p = np.asarray(pool, dtype=np.int64).reshape(-1, 2)
    values = _kernels.combo_values(laplacian(g), p[:, 0].copy(), p[:, 1].copy(), k)
    best = float(values.min())
    idx = int(np.flatnonzero(values <= best + TIE_TOL * abs(best))[0])
    chosen = unrank_combination(idx, len(pool), k)
    return OptimalResult([pool[c] for c in chosen], float(values[idx]), total)


def eta_from(r_opt: float, r_greedy: float) -> float:
    """Efficiency ratio, snapped to 1 when greedy is within ``TIE_TOL`` of optimal."""
    # the greedy set is one of the enumerated subsets, so r_opt <= r_greedy up to rounding
    if r_greedy - r_opt <= TIE_TOL * abs(r_greedy):
        return 1.0
    return r_opt / r_greedy


def efficiency(g: Graph, k: int, placeable=None, budget: int = DEFAULT_SUBSET_BUDGET,
               trace: GreedyTrace | None = None) -> float:
    """``R_opt / R_greedy``; 1 means greedy reached the optimal value."""
    if k == 0:
        _check(g, k, _placeable(g, placeable))
        return 1.0
    if trace is None:
        trace = greedy(g, k, placeable)
    opt = brute_force_optimal(g, k, placeable, budget=budget)
    return eta_from(opt.r_opt, trace.final_r)


def trace_to_dict(g: Graph, k: int, trace: GreedyTrace, opt: OptimalResult | None = None,
                  eta: float | None = None) -> dict:
    doc = {
        "graph": encode_graph6(g) if g.n <= 62 else None,
        "k": k,
        "mode": trace.mode,
        "initial_R": trace.initial_r,
        "steps": [
            {"u": s.pair[0], "v": s.pair[1], "delta_R": s.delta_r, "R_after": s.r_after}
            for s in trace.steps
        ],
    }
    if opt is not None:
        doc["R_opt"] = opt.r_opt
        doc["best_set"] = [list(p) for p in opt.best_set]
    if eta is not None:
        doc["eta"] = eta
    return doc
