"""Exact linear assignment on dense square cost matrices.

``solve`` wraps the O(n^3) shortest-augmenting-path solver, fast enough for
thousand-row instances; ``brute_force_solve`` is the exhaustive oracle for
small instances with a lexicographic tie-break.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from .validation import check_matrix, check_same_shape

__all__ = ["build_cost", "solve", "brute_force_solve", "assignment_objective",
           "BRUTE_FORCE_LIMIT"]

BRUTE_FORCE_LIMIT = 10
_BLOCK = 40320  # 8! permutations per vectorized block


def build_cost(px, py) -> np.ndarray:
    """Squared-distance cost table: cost[i, j] = ||px[i] - py[j]||^2.

    Minimizing total cost over permutations is the same as maximizing the
    total inner product between matched rows, because the row norms do not
    depend on the matching.
    """
    px = check_matrix(px, "px")
    py = check_matrix(py, "py")
    check_same_shape(px, py, "px", "py")
    return cdist(px, py, "sqeuclidean")


def _check_cost(cost) -> np.ndarray:
    arr = check_matrix(cost, "cost", ensure_finite=False)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("cost matrix contains non-finite entries")
    return arr


def solve(cost) -> np.ndarray:
    """Permutation ``pi`` minimizing sum_i cost[i, pi[i]].

    Deterministic: identical input yields an identical permutation. When the
    optimum is not unique the returned representative is solver-defined, so
    compare objectives rather than permutations across solvers.
    """
    arr = _check_cost(cost)
    _, cols = linear_sum_assignment(arr)
    return cols.astype(np.int64)


def brute_force_solve(cost) -> np.ndarray:
    """Exhaustive optimum, lexicographically smallest among co-optimal
    permutations. Refuses n > 10."""
    arr = _check_cost(cost)
    n = arr.shape[0]
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force refused for n={n} > {BRUTE_FORCE_LIMIT}")
    rows = np.arange(n)
    best_obj = np.inf
    best = None
    perms = itertools.permutations(range(n))
    while True:
        chunk = list(itertools.islice(perms, _BLOCK))
        if not chunk:
            break
        block = np.array(chunk, dtype=np.int64)
        objs = arr[rows, block].sum(axis=1)
        k = int(objs.argmin())
        # strict comparison keeps the earliest, i.e. lexicographically
        # smallest, optimum (itertools yields permutations in lex order)
        if objs[k] < best_obj:
            best_obj = float(objs[k])
            best = block[k]
    return best


def assignment_objective(cost, pi) -> float:
    """Total cost of a given matching."""
    arr = _check_cost(cost)
    pi = np.asarray(pi)
    return float(arr[np.arange(arr.shape[0]), pi].sum())
