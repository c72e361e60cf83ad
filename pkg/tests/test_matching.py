import numpy as np
import pytest
from sklearn.base import clone

from matchkit import (LAPSMatcher, NaiveMatcher, NumericalError, assignment_objective,
                      build_cost, brute_force_solve, detect_less_noisy, laps_match,
                      make_signal_sweep_params, mismatch_loss, naive_match, project,
                      sample_pair)
from matchkit.rng import make_generator, stream_generator


def noiseless_pair(seed, n=30, p=12, r=3):
    params = make_signal_sweep_params(make_generator(seed), n, p, r, 10.0, 0.0, 0.0)
    return sample_pair(make_generator(seed + 1), params), params


def haar(rng, rows, cols):
    q, r = np.linalg.qr(rng.standard_normal((rows, cols)))
    return q * np.sign(np.diag(r))


class TestLapsMatch:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_noiseless_exact_recovery(self, seed):
        pair, params = noiseless_pair(seed)
        pi, basis = laps_match(pair.x, pair.y, params.rank)
        assert mismatch_loss(pi, params.pi_star) == 0.0
        assert basis.shape == (params.p, params.rank)

    def test_high_snr_recovery(self):
        params = make_signal_sweep_params(make_generator(3), 100, 50, 5, 400.0, 0.01, 0.01)
        for rep in range(5):
            pair = sample_pair(stream_generator(4, rep), params)
            pi, _ = laps_match(pair.x, pair.y, 5)
            assert mismatch_loss(pi, params.pi_star) == 0.0

    def test_full_rank_projection_equals_naive(self):
        rng = make_generator(5)
        for _ in range(5):
            x = rng.standard_normal((20, 8))
            y = rng.standard_normal((20, 8))
            pi_laps, basis = laps_match(x, y, 8)
            pi_naive = naive_match(x, y)
            obj_laps = assignment_objective(
                build_cost(project(x, basis), project(y, basis)), pi_laps)
            obj_naive = assignment_objective(build_cost(x, y), pi_naive)
            assert obj_laps == pytest.approx(obj_naive, rel=1e-8)

    def test_basis_rotation_invariance(self):
        rng = make_generator(6)
        x = rng.standard_normal((15, 10))
        y = rng.standard_normal((15, 10))
        pi, basis = laps_match(x, y, 4)
        q = haar(make_generator(7), 4, 4)
        rotated = basis @ q
        cost = build_cost(project(x, basis), project(y, basis))
        cost_rot = build_cost(project(x, rotated), project(y, rotated))
        from matchkit import solve
        pi_rot = solve(cost_rot)
        assert assignment_objective(cost_rot, pi_rot) == pytest.approx(
            assignment_objective(cost, pi), rel=1e-8)

    def test_global_scaling_invariance(self):
        rng = make_generator(8)
        x = rng.standard_normal((12, 6))
        y = rng.standard_normal((12, 6))
        c = 3.7
        pi, basis = laps_match(x, y, 3)
        pi_scaled, basis_scaled = laps_match(c * x, c * y, 3)
        obj = assignment_objective(build_cost(project(x, basis), project(y, basis)), pi)
        obj_scaled = assignment_objective(
            build_cost(project(c * x, basis_scaled), project(c * y, basis_scaled)), pi_scaled)
        assert obj_scaled == pytest.approx(c ** 2 * obj, rel=1e-8)

    def test_constant_row_shift_keeps_optimum(self):
        # adding one vector to every row of y shifts all matching costs by a
        # permutation-independent amount
        rng = make_generator(9)
        for _ in range(10):
            x = rng.standard_normal((5, 3))
            y = rng.standard_normal((5, 3))
            shift = rng.standard_normal(3)
            pi = brute_force_solve(build_cost(x, y))
            shifted_cost = build_cost(x, y + shift)
            best = assignment_objective(shifted_cost, brute_force_solve(shifted_cost))
            assert assignment_objective(shifted_cost, pi) == pytest.approx(best, rel=1e-10)

    def test_dominates_naive_at_moderate_snr(self):
        params = make_signal_sweep_params(make_generator(10), 300, 50, 10, 140.0, 1.0, 1.0)
        laps_losses, naive_losses = [], []
        for rep in range(10):
            pair = sample_pair(stream_generator(11, rep), params)
            pi, _ = laps_match(pair.x, pair.y, 10)
            laps_losses.append(mismatch_loss(pi, params.pi_star))
            naive_losses.append(mismatch_loss(naive_match(pair.x, pair.y), params.pi_star))
        assert np.mean(laps_losses) < np.mean(naive_losses)

    def test_rank_deficiency_warning(self):
        rng = make_generator(12)
        base = rng.standard_normal((20, 2)) @ rng.standard_normal((2, 10))
        with pytest.warns(RuntimeWarning):
            laps_match(base, base, 5)

    def test_all_zero_input(self):
        zeros = np.zeros((4, 3))
        with pytest.raises(NumericalError):
            laps_match(zeros, zeros, 2)

    def test_rank_out_of_range(self):
        x = np.ones((4, 3))
        with pytest.raises(ValueError):
            laps_match(x, x, 4)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            laps_match(np.ones((4, 3)), np.ones((4, 2)), 2)


class TestNaiveMatch:
    def test_noiseless_identity(self):
        params = make_signal_sweep_params(make_generator(13), 10, 6, 2, 5.0, 0.0, 0.0)
        identity_params = type(params)(u=params.u, d=params.d, v=params.v,
                                       sigma_x=0.0, sigma_y=0.0,
                                       pi_star=np.arange(10))
        pair = sample_pair(make_generator(14), identity_params)
        assert np.array_equal(naive_match(pair.x, pair.y), np.arange(10))


class TestDetectLessNoisy:
    def test_unequal_noise_monte_carlo(self):
        params = make_signal_sweep_params(make_generator(15), 1000, 50, 10, 400.0, 1.0, 1.5)
        hits = 0
        reps = 100
        for rep in range(reps):
            pair = sample_pair(stream_generator(16, rep), params)
            hits += detect_less_noisy(pair.x, pair.y, 10) == "x"
        assert hits >= 95

    def test_swap_flips_decision(self):
        params = make_signal_sweep_params(make_generator(17), 120, 30, 5, 200.0, 1.0, 2.0)
        pair = sample_pair(make_generator(18), params)
        assert detect_less_noisy(pair.x, pair.y, 5) == "x"
        assert detect_less_noisy(pair.y, pair.x, 5) == "y"

    def test_tie_goes_to_x(self):
        rng = make_generator(19)
        x = rng.standard_normal((10, 6))
        assert detect_less_noisy(x, x, 2) == "x"

    def test_no_residual_spectrum(self):
        x = np.ones((4, 3))
        with pytest.raises(ValueError):
            detect_less_noisy(x, x, 3)


class TestEstimators:
    def test_fit_sets_attributes(self):
        pair, params = noiseless_pair(20)
        est = LAPSMatcher(rank=params.rank).fit(pair.x, pair.y)
        assert mismatch_loss(est.permutation_, params.pi_star) == 0.0
        assert est.basis_.shape == (params.p, params.rank)
        assert est.basis_source_ == "x"
        assert est.objective_ == pytest.approx(0.0, abs=1e-16)
        assert est.wall_time_ >= 0.0

    def test_get_params_round_trip(self):
        est = LAPSMatcher(rank=7, basis_source="auto")
        assert est.get_params() == {"rank": 7, "basis_source": "auto"}
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()
        cloned.set_params(rank=3)
        assert cloned.rank == 3 and est.rank == 7

    def test_auto_basis_source_resolved(self):
        params = make_signal_sweep_params(make_generator(21), 200, 40, 5, 300.0, 1.0, 2.0)
        pair = sample_pair(make_generator(22), params)
        est = LAPSMatcher(rank=5, basis_source="auto").fit(pair.x, pair.y)
        assert est.basis_source_ == "x"

    def test_naive_matcher(self):
        pair, params = noiseless_pair(23)
        est = NaiveMatcher().fit(pair.x, pair.y)
        assert mismatch_loss(est.permutation_, params.pi_star) == 0.0
        assert est.objective_ == pytest.approx(0.0, abs=1e-16)

    def test_invalid_basis_source(self):
        pair, _ = noiseless_pair(24)
        with pytest.raises(ValueError):
            LAPSMatcher(rank=2, basis_source="z").fit(pair.x, pair.y)
