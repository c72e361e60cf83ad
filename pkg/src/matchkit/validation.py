"""Shared input-validation helpers."""

from __future__ import annotations

import numpy as np

__all__ = ["check_matrix", "check_same_shape", "check_permutation"]


def check_matrix(a, name: str = "matrix", *, ensure_finite: bool = True) -> np.ndarray:
    """Coerce ``a`` to a C-contiguous 2-D float64 array and validate it.

    Raises ValueError for wrong dimensionality, empty input, or (when
    ``ensure_finite`` is set) NaN/Inf entries.
    """
    out = np.ascontiguousarray(a, dtype=np.float64)
    if out.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got {out.ndim}-D")
    if out.size == 0:
        raise ValueError(f"{name} is empty (shape {out.shape})")
    if ensure_finite and not np.isfinite(out).all():
        raise ValueError(f"{name} contains non-finite entries")
    return out


def check_same_shape(a: np.ndarray, b: np.ndarray, name_a: str = "first",
                     name_b: str = "second") -> None:
    if a.shape != b.shape:
        raise ValueError(f"{name_a} has shape {a.shape} but {name_b} has shape {b.shape}")


def check_permutation(pi, n: int | None = None, name: str = "permutation") -> np.ndarray:
    """Validate a bijection on {0..n-1} given as an index vector; return int64."""
    out = np.asarray(pi)
    if out.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got {out.ndim}-D")
    if out.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.issubdtype(out.dtype, np.integer):
        cast = out.astype(np.int64)
        if not np.array_equal(cast, out):
            raise ValueError(f"{name} must contain integers")
        out = cast
    out = out.astype(np.int64, copy=False)
    size = out.shape[0]
    if n is not None and size != n:
        raise ValueError(f"{name} has length {size}, expected {n}")
    if out.min() < 0 or out.max() >= size:
        raise ValueError(f"{name} has indices outside 0..{size - 1}")
    seen = np.zeros(size, dtype=bool)
    seen[out] = True
    if not seen.all():
        raise ValueError(f"{name} is not a bijection: some index repeats")
    return out
