import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from annealswarm import (
    MkpInstance,
    brute_force_optimum,
    evaluate,
    is_feasible,
    objective,
    pseudo_utilities,
    repair,
)


class TestInstanceValidation:
    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            MkpInstance(profits=[1, 2], weights=[[1, 2, 3]], capacities=[5])

    def test_negative_data_rejected(self):
        with pytest.raises(ValueError):
            MkpInstance(profits=[1, -2], weights=[[1, 2]], capacities=[5])

    def test_arrays_are_read_only(self):
        inst = MkpInstance(profits=[1, 2], weights=[[1, 2]], capacities=[5])
        with pytest.raises(ValueError):
            inst.profits[0] = 9

    def test_zero_optimum_means_unknown(self):
        inst = MkpInstance(profits=[1], weights=[[1]], capacities=[1], known_optimum=0)
        assert inst.known_optimum is None


class TestObjective:
    def test_empty_knapsack_is_zero(self, mkp6):
        assert objective(mkp6, np.zeros(mkp6.n, dtype=np.int8)) == 0.0

    def test_direct_sum(self):
        inst = MkpInstance(profits=[3, 5, 8], weights=[[1, 1, 1]], capacities=[99])
        assert objective(inst, [1, 0, 1]) == 11.0

    def test_optimal_vector_matches_file_header(self, mknap1):
        # brute force over all 2^6 vectors is the independent oracle here
        p1 = mknap1.problems[0]
        best = brute_force_optimum(p1)
        assert objective(p1, best.bits) == p1.known_optimum == 3800.0

    def test_length_mismatch(self, mkp6):
        with pytest.raises(ValueError):
            objective(mkp6, [0, 1])


class TestFeasibility:
    def test_zero_load(self, mkp7):
        assert is_feasible(mkp7, np.zeros(mkp7.n, dtype=np.int8))

    def test_overload(self):
        inst = MkpInstance(profits=[1, 1], weights=[[2, 2]], capacities=[3])
        assert not is_feasible(inst, [1, 1])

    def test_all_ones_on_first_problem(self, mknap1):
        p1 = mknap1.problems[0]
        ones = np.ones(p1.n, dtype=np.int8)
        expected = bool(np.all(p1.weights.sum(axis=1) <= p1.capacities))
        assert is_feasible(p1, ones) == expected
        assert not expected

    def test_length_mismatch(self, mkp6):
        with pytest.raises(ValueError):
            is_feasible(mkp6, [0])


class TestRepair:
    def test_feasible_input_unchanged(self, tiny_pair):
        out = repair(tiny_pair, [0, 1])
        assert list(out.bits) == [0, 1]
        assert out.fitness == 4.0

    def test_drops_lowest_pseudo_utility_first(self):
        # utilities 1 vs 10; enumeration of the 4 vectors confirms (0,1) is optimal
        inst = MkpInstance(profits=[1, 10], weights=[[1, 1]], capacities=[1])
        out = repair(inst, [1, 1])
        assert list(out.bits) == [0, 1]
        assert out.fitness == 10.0

    def test_readd_pass_recovers_dropped_items(self):
        # dropping the huge item frees room for both cheap ones
        inst = MkpInstance(
            profits=[10, 2, 3], weights=[[10, 1, 1]], capacities=[2]
        )
        out = repair(inst, [1, 1, 1])
        assert list(out.bits) == [0, 1, 1]

    def test_zero_weight_item_ranked_last(self):
        util = pseudo_utilities(
            MkpInstance(profits=[5, 1], weights=[[0, 1]], capacities=[1])
        )
        assert util[0] == np.inf

    @given(st.integers(0, 2**20 - 1), st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_output_always_feasible(self, code, inst_seed):
        rng = np.random.default_rng(inst_seed)
        n = 20
        inst = MkpInstance(
            profits=rng.integers(0, 100, n),
            weights=rng.integers(0, 30, (3, n)),
            capacities=rng.integers(0, 120, 3),
        )
        bits = np.array([(code >> j) & 1 for j in range(n)], dtype=np.int8)
        assert is_feasible(inst, repair(inst, bits).bits)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_removing_an_item_keeps_feasibility(self, seed):
        rng = np.random.default_rng(seed)
        n = 12
        inst = MkpInstance(
            profits=rng.integers(0, 50, n),
            weights=rng.integers(0, 20, (2, n)),
            capacities=rng.integers(10, 100, 2),
        )
        sol = repair(inst, (rng.random(n) < 0.5).astype(np.int8))
        set_items = np.flatnonzero(sol.bits)
        for j in set_items:
            reduced = sol.bits.copy()
            reduced[j] = 0
            assert is_feasible(inst, reduced)


class TestBruteForce:
    def test_nothing_fits(self):
        inst = MkpInstance(profits=[5], weights=[[1]], capacities=[0])
        best = brute_force_optimum(inst)
        assert list(best.bits) == [0] and best.fitness == 0.0

    def test_picks_better_single_item(self, tiny_pair):
        best = brute_force_optimum(tiny_pair)
        assert list(best.bits) == [0, 1] and best.fitness == 4.0

    def test_tie_breaks_lexicographically_smallest(self):
        # both (1,0,1) and (1,1,0) score 3; (1,0,1) is lexicographically smaller
        inst = MkpInstance(profits=[2, 1, 1], weights=[[1, 1, 1]], capacities=[2])
        assert list(brute_force_optimum(inst).bits) == [1, 0, 1]

    def test_first_problem_reaches_stated_optimum(self, mknap1):
        p1 = mknap1.problems[0]
        assert brute_force_optimum(p1).fitness == p1.known_optimum

    def test_enumeration_guard(self):
        inst = MkpInstance(
            profits=np.ones(30), weights=np.ones((1, 30)), capacities=[30]
        )
        with pytest.raises(ValueError):
            brute_force_optimum(inst)

    def test_dominates_repair(self, rng):
        # oracle must be at least as good as any feasible heuristic output
        for _ in range(20):
            n = 10
            inst = MkpInstance(
                profits=rng.integers(0, 40, n),
                weights=rng.integers(0, 12, (2, n)),
                capacities=rng.integers(5, 60, 2),
            )
            best = brute_force_optimum(inst)
            heur = repair(inst, (rng.random(n) < 0.5).astype(np.int8))
            assert best.fitness >= heur.fitness


class TestObjectiveLinearity:
    def test_disjoint_supports_add(self, rng):
        inst = MkpInstance(
            profits=rng.integers(0, 50, 16),
            weights=rng.integers(0, 9, (3, 16)),
            capacities=rng.integers(1, 99, 3),
        )
        a = np.zeros(16, dtype=np.int8)
        b = np.zeros(16, dtype=np.int8)
        a[[0, 3, 7]] = 1
        b[[1, 4, 9]] = 1
        assert objective(inst, a) + objective(inst, b) == objective(inst, a | b)


def test_evaluate_caches_objective(tiny_pair):
    sol = evaluate(tiny_pair, [1, 0])
    assert sol.fitness == objective(tiny_pair, sol.bits) == 3.0
