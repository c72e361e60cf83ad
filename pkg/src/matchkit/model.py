"""Generative sampler for pairs of feature-aligned datasets that share a
low-rank signal, plus structured parameter constructions for experiments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_matrix, check_permutation

__all__ = ["ConstructionError", "ModelParams", "DatasetPair", "LatticeSignal",
           "sample_haar_orthonormal", "sample_pair", "make_signal_sweep_params",
           "make_lattice_params"]

_ORTHO_TOL = 1e-8


class ConstructionError(RuntimeError):
    """A structured parameter construction could not be completed."""


def _check_orthonormal(q: np.ndarray, name: str) -> None:
    resid = np.linalg.norm(q.T @ q - np.eye(q.shape[1]))
    if resid > _ORTHO_TOL:
        raise ValueError(f"{name} columns are not orthonormal (residual {resid:.2e})")


@dataclass(frozen=True)
class ModelParams:
    """(u, d, v, sigma_x, sigma_y, pi_star) parameter bundle.

    The clean signal is ``u @ diag(d) @ v.T``. The first dataset adds white
    Gaussian noise at level sigma_x; the second carries the same signal rows
    scattered to positions ``pi_star`` plus independent noise at sigma_y.
    """

    u: np.ndarray
    d: np.ndarray
    v: np.ndarray
    sigma_x: float
    sigma_y: float
    pi_star: np.ndarray

    def __post_init__(self):
        u = check_matrix(self.u, "u")
        v = check_matrix(self.v, "v")
        d = np.ascontiguousarray(self.d, dtype=np.float64)
        if d.ndim != 1 or d.size == 0:
            raise ValueError("d must be a non-empty vector")
        if u.shape[1] != d.shape[0] or v.shape[1] != d.shape[0]:
            raise ValueError(
                f"rank mismatch: u {u.shape}, v {v.shape}, d length {d.shape[0]}")
        if not (d > 0).all():
            raise ValueError("d entries must be strictly positive")
        if (np.diff(d) > 0).any():
            raise ValueError("d must be non-increasing")
        _check_orthonormal(u, "u")
        _check_orthonormal(v, "v")
        if self.sigma_x < 0 or self.sigma_y < 0:
            raise ValueError("noise levels must be non-negative")
        pi = check_permutation(self.pi_star, n=u.shape[0], name="pi_star")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "sigma_x", float(self.sigma_x))
        object.__setattr__(self, "sigma_y", float(self.sigma_y))
        object.__setattr__(self, "pi_star", pi)

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @property
    def p(self) -> int:
        return self.v.shape[0]

    @property
    def rank(self) -> int:
        return self.d.shape[0]

    def signal(self) -> np.ndarray:
        return (self.u * self.d) @ self.v.T


@dataclass(frozen=True)
class DatasetPair:
    """One sampled (x, y) draw; ``params`` is retained for evaluation."""

    x: np.ndarray
    y: np.ndarray
    params: ModelParams


@dataclass(frozen=True)
class LatticeSignal:
    """Signal factors built from integer-lattice rows.

    ``u @ diag(d)`` equals the scaled lattice rows up to a rotation, so all
    pairwise row distances match the lattice geometry exactly.
    """

    u: np.ndarray
    d: np.ndarray
    points: np.ndarray  # (n, r) integer rows in scan order


def sample_haar_orthonormal(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Uniformly random matrix with orthonormal columns.

    Gaussian matrix followed by QR, with the sign of each column fixed so the
    R factor has a positive diagonal (required for the Haar distribution).
    """
    if cols < 1:
        raise ValueError("cols must be >= 1")
    if rows < cols:
        raise ValueError(f"need rows >= cols, got {rows} < {cols}")
    g = rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def sample_pair(rng: np.random.Generator, params: ModelParams) -> DatasetPair:
    """One draw of the dataset pair under ``params``.

    Noise for the first dataset is drawn before the second. Row i of the
    first dataset corresponds to row ``pi_star[i]`` of the second.
    """
    signal = params.signal()
    x = signal + params.sigma_x * rng.standard_normal(signal.shape)
    aligned = signal + params.sigma_y * rng.standard_normal(signal.shape)
    y = np.empty_like(aligned)
    y[params.pi_star] = aligned
    return DatasetPair(x=x, y=y, params=params)


def make_signal_sweep_params(rng: np.random.Generator, n: int, p: int, r: int,
                             signal: float, sigma_x: float, sigma_y: float) -> ModelParams:
    """Random configuration for strength/dimension sweeps.

    Haar factors, spectrum ``signal * unif(0,1)`` sorted descending, uniform
    hidden matching. The only p-dependent draw (v) comes last, so u, d and
    the hidden matching are identical across calls that differ only in p.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if n < r or p < r:
        raise ValueError(f"need n >= r and p >= r, got n={n}, p={p}, r={r}")
    if signal <= 0:
        raise ValueError("signal must be positive")
    u = sample_haar_orthonormal(rng, n, r)
    w = rng.uniform(size=r)
    while not (w > 0).all():  # measure-zero guard: d must stay positive
        w = rng.uniform(size=r)
    d = np.ascontiguousarray(np.sort(signal * w)[::-1])
    pi_star = rng.permutation(n)
    v = sample_haar_orthonormal(rng, p, r)
    return ModelParams(u=u, d=d, v=v, sigma_x=sigma_x, sigma_y=sigma_y, pi_star=pi_star)


_MAX_LATTICE_CELLS = 20_000_000


def _lattice_points(n: int, r: int) -> np.ndarray:
    """First n integer points of Z^r ordered by (squared norm, lexicographic)."""
    radius = 1
    while True:
        if (2 * radius + 1) ** r > _MAX_LATTICE_CELLS:
            raise ConstructionError(
                f"lattice scan exceeded {_MAX_LATTICE_CELLS} cells before reaching {n} rows")
        axis = np.arange(-radius, radius + 1, dtype=np.int64)
        grid = np.stack(np.meshgrid(*([axis] * r), indexing="ij"), axis=-1).reshape(-1, r)
        sq = (grid ** 2).sum(axis=1)
        inside = grid[sq <= radius * radius]
        if inside.shape[0] >= n:
            # lexsort: last key is primary, so order by norm first, then by
            # coordinates from the first column down
            keys = tuple(inside[:, j] for j in range(r - 1, -1, -1))
            order = np.lexsort(keys + ((inside ** 2).sum(axis=1),))
            return inside[order][:n]
        radius *= 2


def make_lattice_params(n: int, r: int, beta: float, sigma_max: float,
                        fraction_a: float = 1.0) -> LatticeSignal:
    """Signal factors whose pairwise row separations replicate integer-lattice
    geometry scaled by ``beta * sigma_max``.

    The rows are the n smallest lattice points by norm (ties broken
    lexicographically), so every row has a neighbor at the minimum lattice
    spacing and the minimum scaled separation equals ``beta`` exactly -- in
    particular for any requested leading fraction of rows.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if r < 1:
        raise ValueError("r must be >= 1")
    if beta <= 0 or sigma_max <= 0:
        raise ValueError("beta and sigma_max must be positive")
    if not 0 < fraction_a <= 1:
        raise ValueError("fraction_a must be in (0, 1]")
    pts = _lattice_points(n, r)
    scaled = beta * sigma_max * pts.astype(np.float64)
    left, vals, _ = np.linalg.svd(scaled, full_matrices=False)
    keep = vals > vals[0] * 1e-12
    keep[0] = True
    return LatticeSignal(u=np.ascontiguousarray(left[:, keep]), d=vals[keep].copy(),
                         points=pts)
