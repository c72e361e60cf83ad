"""Closed-form separation profiles, error-rate evaluators, and symmetry
diagnostics for low-rank matching configurations.

Asymptotic slack sequences are zero by default; evaluators expose an optional
``delta`` for sensitivity analysis. Constants are absorbed into none of the
formulas: ``poly_rate`` in particular is an order-of-magnitude diagnostic,
not a calibrated error prediction.

Determinism: sums of pairwise terms are taken per row in ascending order with
pairwise (tree) summation, so every total is bit-stable under row permutations
of the input and across repeated runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .validation import check_matrix

__all__ = ["C6", "ck_constant", "gaussian_cdf", "SeparationProfile",
           "separation_profile", "minimax_lower_bound", "minimax_lower_bound_exp",
           "minimax_rate_exp", "upper_rate_c6", "e_unif", "e_loco", "omega_n",
           "poly_rate", "incoherence_mu", "SymmetryDiagnostics",
           "symmetry_diagnostics", "RateBundle", "rate_bundle", "RATE_CSV_FIELDS"]

C6 = (3.0 - 2.0 * math.sqrt(2.0)) / 4.0
_CK = {1: 1.0 / 4.0, 2: 1.0 / 8.0, 3: 1.0 / 12.0, 4: 1.0 / 14.0, 5: 11.0 / 181.0}

PAIRWISE_STORE_LIMIT = 5000
_FLAG_RTOL = 1e-12


def gaussian_cdf(x):
    """Standard normal CDF via the complementary error function; absolute
    error below 1e-12 and exact at 0."""
    return ndtr(x)


def ck_constant(k: int) -> float:
    """Exponent constant per error-cycle length: 1/4, 1/8, 1/12, 1/14, 11/181
    for k = 1..5, then (3 - 2*sqrt(2))/4 for every k >= 6."""
    k = int(k)
    if k < 1:
        raise ValueError("k must be >= 1")
    return _CK[k] if k <= 5 else C6


@dataclass(frozen=True)
class SeparationProfile:
    """Pairwise squared separations of signal rows, in noise units.

    ``scaled_rows[i] = u[i] * d / sigma_max``; separations are squared
    Euclidean distances between scaled rows. The full table is stored only for
    small row counts (or on request); every evaluator can stream from
    ``scaled_rows`` instead, keeping memory O(n).
    """

    scaled_rows: np.ndarray
    beta_i_sq: np.ndarray
    beta_sq: float
    pairwise: np.ndarray | None

    @property
    def n(self) -> int:
        return int(self.scaled_rows.shape[0])


def _sq_dist_row(scaled: np.ndarray, i: int) -> np.ndarray:
    diff = scaled - scaled[i]
    return np.einsum("ij,ij->i", diff, diff)


def separation_profile(u, d, sigma_max: float,
                       store_pairwise: bool | None = None) -> SeparationProfile:
    """Pairwise table (optional) and per-row / global minimum separations."""
    u = check_matrix(u, "u")
    d = np.ascontiguousarray(d, dtype=np.float64)
    if d.ndim != 1 or d.shape[0] != u.shape[1]:
        raise ValueError(f"d must have one entry per column of u, got {d.shape} for {u.shape}")
    if not (d > 0).all():
        raise ValueError("d entries must be positive")
    if sigma_max <= 0:
        raise ValueError("sigma_max must be positive")
    n = u.shape[0]
    if n < 2:
        raise ValueError("need at least two rows")
    scaled = (u * d) / float(sigma_max)
    store = bool(store_pairwise) if store_pairwise is not None else n <= PAIRWISE_STORE_LIMIT
    pairwise = np.empty((n, n)) if store else None
    beta_i = np.empty(n)
    for i in range(n):
        row = _sq_dist_row(scaled, i)
        if pairwise is not None:
            pairwise[i] = row
        # row[i] is exactly 0; the next order statistic is the off-diagonal min
        beta_i[i] = np.partition(row, 1)[1]
    return SeparationProfile(scaled_rows=scaled, beta_i_sq=beta_i,
                             beta_sq=float(beta_i.min()), pairwise=pairwise)


def _row_term_sums(profile: SeparationProfile, term_fn) -> np.ndarray:
    """Per-row sums of term_fn(separations to all other rows).

    Each row's terms are summed in ascending order with tree summation, which
    makes the value bit-stable under any relabeling of the other rows.
    """
    scaled = profile.scaled_rows
    n = scaled.shape[0]
    out = np.empty(n)
    for i in range(n):
        row = profile.pairwise[i] if profile.pairwise is not None else _sq_dist_row(scaled, i)
        vals = term_fn(np.delete(row, i))
        vals.sort()
        out[i] = vals.sum()
    return out


def _normalized_pair_sum(profile: SeparationProfile, term_fn) -> float:
    sums = _row_term_sums(profile, term_fn)
    sums.sort()
    return float(sums.sum() / profile.n)


def minimax_lower_bound(profile: SeparationProfile) -> float:
    """(1/n) * sum over ordered row pairs of Phi(-sqrt(separation / 2))."""
    return _normalized_pair_sum(profile, lambda t: ndtr(-np.sqrt(t / 2.0)))


def minimax_lower_bound_exp(profile: SeparationProfile, delta: float = 0.0) -> float:
    """Exponential form of the lower bound: terms exp(-(1+delta)*sep/4)."""
    c = (1.0 + delta) / 4.0
    return _normalized_pair_sum(profile, lambda t: np.exp(-c * t))


def minimax_rate_exp(profile: SeparationProfile, delta: float = 0.0) -> float:
    """Sharp-exponent rate: (1/n) * sum of exp(-(1-delta)*sep/4)."""
    c = (1.0 - delta) / 4.0
    return _normalized_pair_sum(profile, lambda t: np.exp(-c * t))


def upper_rate_c6(profile: SeparationProfile, delta: float = 0.0) -> float:
    """Achievable rate with the conservative exponent constant C6."""
    c = (1.0 - delta) * C6
    return _normalized_pair_sum(profile, lambda t: np.exp(-c * t))


def _check_rate_args(n: int, p: int, r: int, d_r: float) -> None:
    if n < 2:
        raise ValueError("n must be >= 2")
    if p < 1 or r < 1:
        raise ValueError("p and r must be >= 1")
    if d_r <= 0:
        raise ValueError("d_r must be positive")


def e_unif(n: int, p: int, r: int, d_r: float, sigma_min: float) -> float:
    """Uniform error scale of the estimated right singular subspace:
    sqrt(r * p * log n) / (d_r / sigma_min)."""
    _check_rate_args(n, p, r, d_r)
    return math.sqrt(r * p * math.log(n)) * sigma_min / d_r


def e_loco(n: int, p: int, r: int, d_1: float, d_r: float, sigma_min: float,
           mu: float) -> float:
    """Leave-one-cycle-out error scale of the right singular subspace."""
    _check_rate_args(n, p, r, d_r)
    if d_1 < d_r:
        raise ValueError("d_1 must be >= d_r")
    root = math.sqrt(p) + math.sqrt(math.log(n))
    lead = math.sqrt(mu * r) * root * (d_1 / d_r) * sigma_min / (math.sqrt(n) * d_r)
    tail = root ** 2 * sigma_min ** 2 / d_r ** 2
    return lead + tail


def omega_n(n: int, p: int, r: int, d_1: float, d_r: float, sigma_min: float,
            sigma_max: float) -> float:
    """Signal-to-noise aggregate (d_1^2 / sigma_max^2) / p * e_unif^2."""
    _check_rate_args(n, p, r, d_r)
    if sigma_max <= 0:
        raise ValueError("sigma_max must be positive")
    return (d_1 ** 2 / sigma_max ** 2) / p * e_unif(n, p, r, d_r, sigma_min) ** 2


def poly_rate(n: int, p: int, r: int, beta_sq: float, d_r: float,
              sigma_min: float) -> float:
    """Polynomial error bound with unit constants:
    (p / beta^2) * e_unif * (1/sqrt(n) + 1/sqrt(p)) + r / beta^2."""
    _check_rate_args(n, p, r, d_r)
    if beta_sq <= 0:
        raise ValueError("beta_sq must be positive")
    e = e_unif(n, p, r, d_r, sigma_min)
    return (p / beta_sq) * e * (1.0 / math.sqrt(n) + 1.0 / math.sqrt(p)) + r / beta_sq


def incoherence_mu(u) -> float:
    """How unevenly row mass spreads across ``u``: n * max_i ||u[i]||^2 / r,
    clamped to [1, n]. 1 means perfectly spread, n means one spiked row."""
    u = check_matrix(u, "u")
    n, r = u.shape
    raw = n * float((u ** 2).sum(axis=1).max()) / r
    return float(min(max(raw, 1.0), float(n)))


@dataclass(frozen=True)
class SymmetryDiagnostics:
    """Per-row energies and finite-sample symmetry flags.

    ``e_table[:, k-1]`` holds E_i(k) = sum over other rows of
    exp(-(1-delta) * C_k * separation). The weak flag per k checks
    max_i E_i(k) <= mean_i E_i(k); the strong flag (k >= 2) checks
    E_i(k)^k <= sum over other rows of exp(-(1-delta') * k * C_k * separation)
    for every i. Both are evaluated with zero slack unless deltas are given,
    which makes them very strict at finite n: they hold only for essentially
    homogeneous profiles.
    """

    e_table: np.ndarray
    weak_symmetry: dict[int, bool]
    strong_symmetry: dict[int, bool]


def symmetry_diagnostics(profile: SeparationProfile, k_max: int,
                         delta: float = 0.0, delta_prime: float = 0.0) -> SymmetryDiagnostics:
    if not 1 <= int(k_max) <= 6:
        raise ValueError("k_max must be in 1..6")
    k_max = int(k_max)
    n = profile.n
    e_table = np.empty((n, k_max))
    weak: dict[int, bool] = {}
    strong: dict[int, bool] = {}
    for k in range(1, k_max + 1):
        ck = ck_constant(k)
        coeff = (1.0 - delta) * ck
        rows = _row_term_sums(profile, lambda t, c=coeff: np.exp(-c * t))
        e_table[:, k - 1] = rows
        if delta_prime == delta:
            rows_prime = rows
        else:
            cp = (1.0 - delta_prime) * ck
            rows_prime = _row_term_sums(profile, lambda t, c=cp: np.exp(-c * t))
        ordered = np.sort(rows_prime)
        mean = ordered.sum() / n
        weak[k] = bool(rows.max() <= mean * (1.0 + _FLAG_RTOL))
        if k >= 2:
            cs = (1.0 - delta_prime) * k * ck
            rhs = _row_term_sums(profile, lambda t, c=cs: np.exp(-c * t))
            strong[k] = bool((rows ** k <= rhs * (1.0 + _FLAG_RTOL)).all())
    return SymmetryDiagnostics(e_table=e_table, weak_symmetry=weak, strong_symmetry=strong)


RATE_CSV_FIELDS = ("lower_bound", "lower_bound_exp", "rate_exp", "rate_c6",
                   "poly_rate", "e_unif", "e_loco", "omega_n", "mu", "beta_sq")


@dataclass(frozen=True)
class RateBundle:
    """Every closed-form rate and diagnostic for one configuration, slack-free."""

    lower_bound: float
    lower_bound_exp: float
    upper_sharp: float
    upper_c6: float
    poly_rate: float
    e_unif: float
    e_loco: float
    omega_n: float
    incoherence_mu: float
    beta_sq: float

    def csv_values(self) -> tuple[float, ...]:
        return (self.lower_bound, self.lower_bound_exp, self.upper_sharp,
                self.upper_c6, self.poly_rate, self.e_unif, self.e_loco,
                self.omega_n, self.incoherence_mu, self.beta_sq)

    def to_csv(self) -> str:
        header = ",".join(RATE_CSV_FIELDS)
        row = ",".join(repr(float(v)) for v in self.csv_values())
        return f"{header}\n{row}\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())


def rate_bundle(u, d, p: int, sigma_x: float, sigma_y: float) -> RateBundle:
    """Assemble the full bundle from signal factors and noise levels.

    ``p`` is the ambient feature dimension, which the subspace-error scales
    need but ``u`` (n-by-r) does not determine.
    """
    u = check_matrix(u, "u")
    d = np.ascontiguousarray(d, dtype=np.float64)
    if sigma_x < 0 or sigma_y < 0:
        raise ValueError("noise levels must be non-negative")
    sigma_max = max(float(sigma_x), float(sigma_y))
    sigma_min = min(float(sigma_x), float(sigma_y))
    if sigma_max <= 0:
        raise ValueError("need a positive noise level")
    n, r = u.shape
    if p < r:
        raise ValueError(f"ambient dimension p={p} cannot be below the rank r={r}")
    profile = separation_profile(u, d, sigma_max)
    mu = incoherence_mu(u)
    d_1 = float(d[0])
    d_r = float(d[-1])
    return RateBundle(
        lower_bound=minimax_lower_bound(profile),
        lower_bound_exp=minimax_lower_bound_exp(profile),
        upper_sharp=minimax_rate_exp(profile),
        upper_c6=upper_rate_c6(profile),
        poly_rate=poly_rate(n, p, r, profile.beta_sq, d_r, sigma_min),
        e_unif=e_unif(n, p, r, d_r, sigma_min),
        e_loco=e_loco(n, p, r, d_1, d_r, sigma_min, mu),
        omega_n=omega_n(n, p, r, d_1, d_r, sigma_min, sigma_max),
        incoherence_mu=mu,
        beta_sq=profile.beta_sq,
    )
