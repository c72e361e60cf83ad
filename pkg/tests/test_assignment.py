import itertools

import numpy as np
import pytest

from matchkit import (assignment_objective, brute_force_solve, build_cost, solve)


class TestBuildCost:
    def test_identity_rows(self):
        cost = build_cost(np.eye(2), np.eye(2))
        assert np.array_equal(cost, [[0.0, 2.0], [2.0, 0.0]])

    def test_scalar_rows(self):
        assert np.array_equal(build_cost([[1.0]], [[4.0]]), [[9.0]])

    def test_argmin_cost_equals_argmax_inner_product(self):
        # exhaustive check over every outcome on a 5-row instance
        rng = np.random.default_rng(0)
        px = rng.standard_normal((5, 3))
        py = rng.standard_normal((5, 3))
        cost = build_cost(px, py)
        best_cost, best_inner = None, None
        for perm in itertools.permutations(range(5)):
            perm = np.array(perm)
            total_cost = cost[np.arange(5), perm].sum()
            total_inner = float((px * py[perm]).sum())
            if best_cost is None or total_cost < best_cost[0]:
                best_cost = (total_cost, tuple(perm))
            if best_inner is None or total_inner > best_inner[0]:
                best_inner = (total_inner, tuple(perm))
        assert best_cost[1] == best_inner[1]

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            build_cost(np.eye(2), np.eye(3))


class TestSolve:
    def test_zero_diagonal(self):
        assert np.array_equal(solve([[0.0, 2.0], [2.0, 0.0]]), [0, 1])

    def test_anti_diagonal_optimum(self):
        assert np.array_equal(solve([[5.0, 1.0], [1.0, 5.0]]), [1, 0])

    @pytest.mark.parametrize("n", range(2, 8))
    def test_matches_brute_force_objective(self, n):
        rng = np.random.default_rng(n)
        for _ in range(100):
            cost = rng.random((n, n))
            fast = solve(cost)
            exact = brute_force_solve(cost)
            assert assignment_objective(cost, fast) == assignment_objective(cost, exact)

    def test_row_and_column_shift_invariance(self):
        # shifting a row or column by a constant must not break optimality
        rng = np.random.default_rng(10)
        for _ in range(50):
            n = int(rng.integers(2, 7))
            cost = rng.random((n, n))
            pi = solve(cost)
            shifted = cost.copy()
            shifted[int(rng.integers(n))] += rng.random()
            shifted[:, int(rng.integers(n))] += rng.random()
            best = assignment_objective(shifted, brute_force_solve(shifted))
            assert assignment_objective(shifted, pi) == pytest.approx(best, rel=1e-12)

    @pytest.mark.parametrize("n", [1, 3, 17, 120, 500])
    def test_output_is_bijection(self, n):
        rng = np.random.default_rng(n)
        pi = solve(rng.random((n, n)))
        assert np.array_equal(np.sort(pi), np.arange(n))

    def test_determinism(self):
        cost = np.random.default_rng(11).random((40, 40))
        assert np.array_equal(solve(cost), solve(cost))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            solve([[0.0, np.inf], [1.0, 0.0]])

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            solve(np.zeros((2, 3)))


class TestBruteForce:
    def test_single_row(self):
        assert np.array_equal(brute_force_solve([[7.0]]), [0])

    def test_zero_diagonal(self):
        assert np.array_equal(brute_force_solve([[0.0, 2.0], [2.0, 0.0]]), [0, 1])

    def test_lexicographic_tie_break(self):
        # every permutation is optimal on a constant matrix
        assert np.array_equal(brute_force_solve(np.zeros((4, 4))), [0, 1, 2, 3])

    def test_same_objective_as_solve(self):
        rng = np.random.default_rng(12)
        cost = rng.random((6, 6))
        assert assignment_objective(cost, brute_force_solve(cost)) == \
            assignment_objective(cost, solve(cost))

    def test_refuses_large_instances(self):
        with pytest.raises(ValueError):
            brute_force_solve(np.zeros((11, 11)))
