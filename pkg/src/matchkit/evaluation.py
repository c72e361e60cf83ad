"""Mismatch loss, error-cycle structure, and label-level accuracy."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .permutation import invert_permutation
from .validation import check_permutation

__all__ = ["mismatch_loss", "cycle_decompose", "label_confusion", "ConfusionTable",
           "MatchReport", "score_match"]


def _check_pair(pi_hat, pi_star):
    a = check_permutation(pi_hat, name="pi_hat")
    b = check_permutation(pi_star, n=a.shape[0], name="pi_star")
    return a, b


def mismatch_loss(pi_hat, pi_star) -> float:
    """Fraction of rows matched to the wrong partner.

    Equals ||P_hat - P_star||_F^2 / (2n) on the matrix views.
    """
    a, b = _check_pair(pi_hat, pi_star)
    return float((a != b).sum() / a.shape[0])


def cycle_decompose(pi_hat, pi_star) -> dict[int, int]:
    """Histogram {cycle length >= 2: count} of the error cycles.

    Wrong matches always close into cycles: follow i -> j where j is the row
    whose true partner was taken by row i (pi_star[j] == pi_hat[i]). Fixed
    points of that map are correct matches and are excluded; a lone mismatch
    is therefore impossible.

    Worked 3-cycle: pi_star = (0,1,2), pi_hat = (1,2,0). Row 0 took row 1's
    partner, row 1 took row 2's, row 2 took row 0's: one cycle of length 3,
    so the histogram is {3: 1}.
    """
    a, b = _check_pair(pi_hat, pi_star)
    composed = invert_permutation(b)[a]  # composed[i] = j with pi_star[j] == pi_hat[i]
    n = a.shape[0]
    seen = np.zeros(n, dtype=bool)
    counts: Counter[int] = Counter()
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = composed[i]
            length += 1
        if length >= 2:
            counts[length] += 1
    return dict(counts)


@dataclass(frozen=True)
class ConfusionTable:
    """Square label-agreement table; rows index the first dataset's label."""

    categories: tuple[str, ...]
    counts: np.ndarray

    def normalized(self) -> np.ndarray:
        totals = self.counts.sum(axis=1, keepdims=True)
        return self.counts / np.where(totals == 0, 1, totals)

    def to_csv(self) -> str:
        lines = [",".join(self.categories)]
        for row in self.counts:
            lines.append(",".join(str(int(c)) for c in row))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())


def label_confusion(pi_hat, labels_x, labels_y):
    """Label-level agreement of a matching.

    Returns ``(accuracy, table)``: accuracy is the fraction of rows whose
    matched partner carries the same label; the table counts label pairs.
    Categories are ordered by first appearance in ``labels_x`` (extras from
    ``labels_y`` appended in their own first-appearance order).
    """
    pi = check_permutation(pi_hat, name="pi_hat")
    n = pi.shape[0]
    lx = [str(c) for c in labels_x]
    ly = [str(c) for c in labels_y]
    if len(lx) != n or len(ly) != n:
        raise ValueError(f"label lengths {len(lx)} and {len(ly)} do not match n={n}")
    categories = list(dict.fromkeys(lx))
    known = set(categories)
    categories += [c for c in dict.fromkeys(ly) if c not in known]
    index = {c: k for k, c in enumerate(categories)}
    counts = np.zeros((len(categories), len(categories)), dtype=np.int64)
    hits = 0
    for i in range(n):
        cx = lx[i]
        cy = ly[pi[i]]
        counts[index[cx], index[cy]] += 1
        hits += cx == cy
    return hits / n, ConfusionTable(categories=tuple(categories), counts=counts)


@dataclass(frozen=True)
class MatchReport:
    """Estimated matching plus quality diagnostics against a known truth."""

    permutation: np.ndarray
    loss: float
    cycles: dict[int, int]
    objective: float
    wall_time: float
    basis_source: str


def score_match(pi_hat, pi_star, objective: float = float("nan"),
                wall_time: float = 0.0, basis_source: str = "x") -> MatchReport:
    """Bundle loss and cycle structure of an estimate into a report."""
    pi = check_permutation(pi_hat, name="pi_hat")
    return MatchReport(
        permutation=pi,
        loss=mismatch_loss(pi, pi_star),
        cycles=cycle_decompose(pi, pi_star),
        objective=float(objective),
        wall_time=float(wall_time),
        basis_source=basis_source,
    )
