import numpy as np
import pytest

from matchkit import (SvdResult, frobenius_inner, project, subspace_distance,
                      truncated_svd)


def haar(rng, rows, cols):
    q, r = np.linalg.qr(rng.standard_normal((rows, cols)))
    return q * np.sign(np.diag(r))


class TestTruncatedSvd:
    def test_diagonal_matrix(self):
        res = truncated_svd(np.diag([3.0, 2.0, 1.0]), 2)
        assert np.allclose(res.singular_values, [3.0, 2.0])
        # right factor spans e1, e2
        span = np.abs(res.right)
        assert np.allclose(span[:2], np.eye(2))
        assert np.allclose(span[2], 0.0)

    def test_identity(self):
        res = truncated_svd(np.eye(4), 4)
        assert np.allclose(res.singular_values, np.ones(4))

    def test_full_rank_reconstruction(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((50, 30))
        res = truncated_svd(a, 30)
        rel = np.linalg.norm(a - res.reconstruct()) / np.linalg.norm(a)
        assert rel <= 1e-8

    @pytest.mark.parametrize("shape", [(7, 4), (4, 7), (12, 12), (30, 5)])
    def test_reconstruction_invariant(self, shape):
        rng = np.random.default_rng(hash(shape) % 2**32)
        a = rng.standard_normal(shape)
        res = truncated_svd(a, min(shape))
        resid = np.linalg.norm(a - res.reconstruct())
        assert resid <= 1e-8 * (1.0 + np.linalg.norm(a))

    def test_orthonormality_residuals(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((40, 25))
        res = truncated_svd(a, 10)
        r = res.rank
        assert np.linalg.norm(res.left.T @ res.left - np.eye(r)) <= 1e-8
        assert np.linalg.norm(res.right.T @ res.right - np.eye(r)) <= 1e-8
        assert (np.diff(res.singular_values) <= 0).all()
        assert (res.singular_values >= 0).all()

    def test_eckart_young_spot_check(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            base = rng.standard_normal((20, 2)) @ rng.standard_normal((2, 15))
            noise = 1e-6 * rng.standard_normal((20, 15))
            a = base + noise
            res = truncated_svd(a, 2)
            assert np.linalg.norm(a - res.reconstruct()) <= np.linalg.norm(noise) * 1.01

    def test_sign_convention_and_determinism(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((12, 8))
        first = truncated_svd(a, 5)
        second = truncated_svd(a, 5)
        assert np.array_equal(first.right, second.right)
        assert np.array_equal(first.left, second.left)
        for j in range(5):
            col = first.right[:, j]
            assert col[np.abs(col).argmax()] > 0

    def test_rank_out_of_range(self):
        a = np.eye(3)
        with pytest.raises(ValueError):
            truncated_svd(a, 0)
        with pytest.raises(ValueError):
            truncated_svd(a, 4)

    def test_rejects_non_finite(self):
        a = np.eye(3)
        a[0, 0] = np.nan
        with pytest.raises(ValueError):
            truncated_svd(a, 1)


class TestProject:
    def test_identity(self):
        assert np.array_equal(project(np.eye(3), np.eye(3)), np.eye(3))

    def test_column_selection(self):
        x = np.array([[1.0, 2.0], [3.0, 4.0]])
        assert np.array_equal(project(x, np.array([[1.0], [0.0]])), [[1.0], [3.0]])

    def test_contraction_under_orthonormal_basis(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal((10, 6))
        basis = haar(rng, 6, 2)
        assert np.linalg.norm(project(x, basis)) <= np.linalg.norm(x)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            project(np.eye(3), np.eye(4))


class TestSubspaceDistance:
    def test_identical(self):
        v = haar(np.random.default_rng(5), 6, 2)
        assert subspace_distance(v, v) == 0.0

    def test_sign_flip_spans_same_space(self):
        v = np.array([[1.0], [0.0]])
        assert subspace_distance(v, -v) == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal_axes(self):
        e1 = np.array([[1.0], [0.0]])
        e2 = np.array([[0.0], [1.0]])
        assert subspace_distance(e1, e2) == pytest.approx(np.sqrt(2.0))

    def test_matches_explicit_projector_difference(self):
        rng = np.random.default_rng(6)
        v1 = haar(rng, 9, 3)
        v2 = haar(rng, 9, 3)
        direct = np.linalg.norm(v1 @ v1.T - v2 @ v2.T)
        assert subspace_distance(v1, v2) == pytest.approx(direct, abs=1e-10)

    def test_symmetry_and_axis_spans(self):
        rng = np.random.default_rng(7)
        v1 = haar(rng, 8, 2)
        v2 = haar(rng, 8, 2)
        assert subspace_distance(v1, v2) == pytest.approx(subspace_distance(v2, v1))
        # axis-aligned spans coincide iff the same axes are picked
        a = np.zeros((5, 2)); a[0, 0] = 1.0; a[1, 1] = 1.0
        b = np.zeros((5, 2)); b[1, 0] = 1.0; b[0, 1] = 1.0  # same span, swapped order
        c = np.zeros((5, 2)); c[0, 0] = 1.0; c[2, 1] = 1.0  # different span
        assert subspace_distance(a, b) == pytest.approx(0.0, abs=1e-12)
        assert subspace_distance(a, c) > 1.0

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            subspace_distance(np.eye(3), np.eye(4))


class TestFrobeniusInner:
    def test_identity_pair(self):
        assert frobenius_inner(np.eye(2), np.eye(2)) == 2.0

    def test_trace_example(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        assert frobenius_inner(a, np.eye(2)) == 5.0

    def test_equals_product_then_trace(self):
        rng = np.random.default_rng(8)
        a = rng.standard_normal((5, 5))
        b = rng.standard_normal((5, 5))
        assert frobenius_inner(a, b) == pytest.approx(np.trace(a.T @ b), rel=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            frobenius_inner(np.eye(2), np.eye(3))


def test_objective_depends_only_on_projector():
    # replacing the basis by basis @ Q (orthogonal Q) leaves the projected
    # inner product unchanged
    rng = np.random.default_rng(9)
    x = rng.standard_normal((10, 6))
    y = rng.standard_normal((10, 6))
    basis = haar(rng, 6, 3)
    q = haar(rng, 3, 3)
    before = frobenius_inner(project(x, basis), project(y, basis))
    after = frobenius_inner(project(x, basis @ q), project(y, basis @ q))
    assert after == pytest.approx(before, abs=1e-8)


def test_svd_result_rank_property():
    res = truncated_svd(np.diag([2.0, 1.0]), 1)
    assert isinstance(res, SvdResult)
    assert res.rank == 1
