"""Permutations as index vectors, with the 0/1 matrix dual view.

The vector view ``pi`` and matrix view ``P`` are linked by ``P[i, pi[i]] = 1``,
so ``P @ a`` gathers rows: ``(P @ a)[i] == a[pi[i]]``.
"""

from __future__ import annotations

import numpy as np

from .validation import check_permutation

__all__ = ["permutation_matrix", "matrix_to_permutation", "invert_permutation",
           "random_permutation"]


def permutation_matrix(pi) -> np.ndarray:
    """Matrix view of an index vector."""
    pi = check_permutation(pi)
    n = pi.shape[0]
    out = np.zeros((n, n))
    out[np.arange(n), pi] = 1.0
    return out


def matrix_to_permutation(p) -> np.ndarray:
    """Inverse of :func:`permutation_matrix`; validates the 0/1 structure."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"permutation matrix must be square, got shape {arr.shape}")
    if not np.isin(arr, (0.0, 1.0)).all():
        raise ValueError("permutation matrix entries must be exactly 0 or 1")
    if (arr.sum(axis=1) != 1.0).any() or (arr.sum(axis=0) != 1.0).any():
        raise ValueError("each row and column must contain exactly one 1")
    return arr.argmax(axis=1).astype(np.int64)


def invert_permutation(pi) -> np.ndarray:
    """Index vector ``inv`` with ``inv[pi[i]] == i``."""
    pi = check_permutation(pi)
    out = np.empty_like(pi)
    out[pi] = np.arange(pi.shape[0], dtype=np.int64)
    return out


def random_permutation(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniformly random bijection on {0..n-1}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return rng.permutation(n).astype(np.int64)
