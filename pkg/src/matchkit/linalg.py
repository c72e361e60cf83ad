"""Dense linear-algebra kernels: truncated SVD, projection, norms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_matrix, check_same_shape

__all__ = ["NumericalError", "SvdResult", "truncated_svd", "project",
           "subspace_distance", "frobenius_inner"]


class NumericalError(RuntimeError):
    """A numerical routine failed (non-convergence or degenerate input)."""


@dataclass(frozen=True)
class SvdResult:
    """Top-r singular triple.

    ``left`` is n-by-r and ``right`` is p-by-r, both with orthonormal columns;
    ``singular_values`` is descending and non-negative.
    """

    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray

    @property
    def rank(self) -> int:
        return int(self.singular_values.shape[0])

    def reconstruct(self) -> np.ndarray:
        """left @ diag(singular_values) @ right.T"""
        return (self.left * self.singular_values) @ self.right.T


def truncated_svd(a, r: int) -> SvdResult:
    """Best rank-``r`` factorization of ``a`` in Frobenius norm.

    Deterministic for identical input: the factors are post-processed so that
    the largest-magnitude entry of every right singular vector is positive,
    removing the sign ambiguity of singular pairs. Within a block of tied
    singular values the basis is whatever the backend produced; callers must
    not rely on a canonical choice there.
    """
    a = check_matrix(a, "a")
    n, p = a.shape
    if not 1 <= r <= min(n, p):
        raise ValueError(f"rank must be in [1, {min(n, p)}], got {r}")
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - backend dependent
        raise NumericalError(f"SVD did not converge: {exc}") from exc
    left = u[:, :r].copy()
    vals = s[:r].copy()
    right = vh[:r].T.copy()
    anchor = np.abs(right).argmax(axis=0)
    signs = np.where(right[anchor, np.arange(r)] < 0, -1.0, 1.0)
    right *= signs
    left *= signs
    return SvdResult(left=left, singular_values=vals, right=right)


def project(x, basis) -> np.ndarray:
    """x @ basis (rows of ``x`` expressed against the basis columns)."""
    x = check_matrix(x, "x")
    basis = check_matrix(basis, "basis")
    if x.shape[1] != basis.shape[0]:
        raise ValueError(
            f"cannot project: x has {x.shape[1]} columns, basis has {basis.shape[0]} rows")
    return x @ basis


def subspace_distance(v1, v2) -> float:
    """Frobenius distance between the projectors v1 @ v1.T and v2 @ v2.T.

    Computed as sqrt(2r - 2*||v1.T @ v2||_F^2), which never materializes the
    p-by-p projectors. Both arguments must have orthonormal columns.
    """
    v1 = check_matrix(v1, "v1")
    v2 = check_matrix(v2, "v2")
    check_same_shape(v1, v2, "v1", "v2")
    r = v1.shape[1]
    cross = float(np.linalg.norm(v1.T @ v2) ** 2)
    return float(np.sqrt(max(2.0 * r - 2.0 * cross, 0.0)))


def frobenius_inner(a, b) -> float:
    """Trace inner product: sum of the elementwise products."""
    a = check_matrix(a, "a")
    b = check_matrix(b, "b")
    check_same_shape(a, b, "a", "b")
    return float(np.vdot(a, b))
