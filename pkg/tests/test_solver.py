from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from kgrip.enumerate import enumerate_connected_graphs
from kgrip.errors import BudgetExceededError, InfeasibleError
from kgrip.graph import Graph, add_links, complement_links
from kgrip.resistance import kirchhoff_index, normalize
from kgrip.solver import (
    brute_force_optimal,
    efficiency,
    eta_from,
    greedy,
    select_max,
    trace_to_dict,
    unrank_combination,
)

from conftest import complete, cycle, exact_kirchhoff, path, random_connected, star


def oracle_optimum(g, k):
    """Plain itertools enumeration with a fresh solve per subset."""
    best = None
    for sub in combinations(complement_links(g), k):
        r = kirchhoff_index(add_links(g, sub))
        if best is None or r < best[0] * (1 - 1e-12):
            best = (r, list(sub))
    return best


class TestGreedy:
    @pytest.mark.parametrize("mode", ["incremental", "naive"])
    def test_star4(self, mode):
        t = greedy(star(4), 1, mode=mode)
        assert t.initial_r == pytest.approx(9.0)
        assert t.pairs == [(1, 2)]
        assert t.steps[0].delta_r == pytest.approx(8 / 3)
        assert t.final_r == pytest.approx(19 / 3)

    @pytest.mark.parametrize("mode", ["incremental", "naive"])
    def test_c5(self, mode):
        t = greedy(cycle(5), 1, mode=mode)
        assert t.initial_r == pytest.approx(10.0)
        assert t.pairs == [(0, 2)]
        assert t.final_r == pytest.approx(float(exact_kirchhoff(5, cycle(5).links + ((0, 2),))))
        assert t.final_r == pytest.approx(90 / 11)

    def test_k0(self):
        g = cycle(6)
        t = greedy(g, 0)
        assert t.steps == []
        assert t.final_r == pytest.approx(kirchhoff_index(g))

    def test_trace_invariants(self, rng):
        for _ in range(20):
            g = random_connected(rng, int(rng.integers(4, 16)), p=0.3)
            k = min(4, len(complement_links(g)))
            t = greedy(g, k)
            assert len(t.steps) == k
            prev = t.initial_r
            for s in t.steps:
                assert s.delta_r > 0
                assert s.r_after < prev
                assert s.r_after == pytest.approx(prev - s.delta_r, abs=1e-9)
                prev = s.r_after
            assert len(set(t.pairs)) == k
            assert set(t.pairs) <= set(complement_links(g))

    def test_placeable_restricts(self):
        t = greedy(path(5), 2, placeable=[(3, 1), (0, 4), (0, 2)])
        assert set(t.pairs) <= {(1, 3), (0, 4), (0, 2)}
        assert t.pairs[0] == (0, 4)

    def test_errors(self):
        with pytest.raises(InfeasibleError):
            greedy(complete(4), 1)
        with pytest.raises(InfeasibleError):
            greedy(Graph.from_links(4, [(0, 1), (2, 3)]), 1)
        with pytest.raises(InfeasibleError):
            greedy(path(4), 1, placeable=[(0, 1)])
        with pytest.raises(InfeasibleError):
            greedy(path(4), 2, placeable=[(0, 2)])
        with pytest.raises(ValueError):
            greedy(path(4), 1, mode="fast")

    def test_modes_agree(self, rng):
        for _ in range(25):
            g = random_connected(rng, int(rng.integers(3, 20)), p=0.3)
            k = min(int(rng.integers(1, 6)), len(complement_links(g)))
            a, b = greedy(g, k), greedy(g, k, mode="naive")
            assert a.pairs == b.pairs
            np.testing.assert_allclose([s.delta_r for s in a.steps],
                                       [s.delta_r for s in b.steps], rtol=1e-8)

    def test_argmax_invariance(self, rng):
        # maximizing the drop in R picks the same link as maximizing normalized r
        for _ in range(20):
            g = random_connected(rng, int(rng.integers(4, 14)), p=0.3)
            pairs = complement_links(g)
            if not pairs:
                continue
            r = np.array([normalize(kirchhoff_index(add_links(g, [p])), g.n) for p in pairs])
            assert pairs[select_max(r, tol=1e-9)] == greedy(g, 1).pairs[0]

    def test_select_max_ties(self):
        assert select_max(np.array([1.0, 2.0, 2.0 * (1 - 1e-14), 2.0])) == 1
        assert select_max(np.array([1.0, 2.0 * (1 - 1e-6), 2.0])) == 2


class TestOptimal:
    def test_star4(self):
        opt = brute_force_optimal(star(4), 1)
        assert opt.r_opt == pytest.approx(19 / 3)
        assert opt.best_set == [(1, 2)]
        assert opt.n_evaluated == 3

    def test_c6(self):
        opt = brute_force_optimal(cycle(6), 1)
        assert opt.best_set == [(0, 3)]
        assert opt.n_evaluated == 9
        assert opt.r_opt == pytest.approx(float(exact_kirchhoff(6, cycle(6).links + ((0, 3),))))

    @pytest.mark.parametrize("g", [path(4), star(5), cycle(5)])
    def test_all_links_gives_complete(self, g):
        k = len(complement_links(g))
        assert brute_force_optimal(g, k).r_opt == pytest.approx(g.n - 1)

    def test_against_oracle(self, rng):
        for _ in range(25):
            g = random_connected(rng, int(rng.integers(4, 9)), p=0.4)
            m = len(complement_links(g))
            k = int(rng.integers(1, min(m, 4) + 1)) if m else 0
            if k == 0:
                continue
            opt = brute_force_optimal(g, k)
            r, best = oracle_optimum(g, k)
            assert opt.r_opt == pytest.approx(r, rel=1e-10)
            assert kirchhoff_index(add_links(g, opt.best_set)) == pytest.approx(r, rel=1e-10)
            assert opt.best_set == best

    def test_budget(self):
        g = path(10)
        with pytest.raises(BudgetExceededError) as info:
            brute_force_optimal(g, 3, budget=100)
        assert info.value.count == 7140
        assert "7140" in str(info.value)

    def test_dominates_greedy(self, rng):
        for _ in range(20):
            g = random_connected(rng, int(rng.integers(4, 9)), p=0.35)
            k = min(3, len(complement_links(g)))
            if k == 0:
                continue
            assert brute_force_optimal(g, k).r_opt <= greedy(g, k).final_r * (1 + 1e-12)

    def test_k1_greedy_is_optimal(self):
        for n in (4, 5, 6):
            for g in enumerate_connected_graphs(n):
                if complement_links(g):
                    assert greedy(g, 1).pairs == brute_force_optimal(g, 1).best_set


def test_unrank_matches_itertools():
    for m in range(0, 8):
        for k in range(0, m + 1):
            for idx, combo in enumerate(combinations(range(m), k)):
                assert unrank_combination(idx, m, k) == list(combo)


class TestEfficiency:
    def test_k0(self):
        assert efficiency(cycle(5), 0) == 1.0

    def test_five_nodes_k3(self):
        for g in enumerate_connected_graphs(5):
            if len(complement_links(g)) >= 3:
                assert efficiency(g, 3) == 1.0

    def test_range(self, rng):
        for _ in range(15):
            g = random_connected(rng, 7, p=0.4)
            k = min(2, len(complement_links(g)))
            if k:
                assert 0 < efficiency(g, k) <= 1

    def test_eta_snap(self):
        assert eta_from(10.0, 10.0 * (1 + 1e-15)) == 1.0
        assert eta_from(9.0, 10.0) == pytest.approx(0.9)

    def test_known_gap(self):
        # a 5-node graph at k=2 where greedy is strictly suboptimal
        etas = [efficiency(g, 2) for g in enumerate_connected_graphs(5)
                if len(complement_links(g)) >= 2]
        assert min(etas) < 1
        assert round(min(etas), 3) == 0.937


def test_trace_json_shape():
    g = star(4)
    t = greedy(g, 1)
    opt = brute_force_optimal(g, 1)
    doc = trace_to_dict(g, 1, t, opt, eta_from(opt.r_opt, t.final_r))
    assert doc["graph"] == "Cs"
    assert doc["mode"] == "incremental"
    assert doc["steps"][0]["u"] == 1 and doc["steps"][0]["v"] == 2
    assert doc["eta"] == 1.0
    assert doc["best_set"] == [[1, 2]]
    assert Fraction(doc["R_opt"]).limit_denominator(100) == Fraction(19, 3)
