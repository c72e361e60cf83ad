"""Headerless CSV ingestion and serialization for matrices, labels, and
matchings.

All indices are 0-based, on disk and in memory (biology tooling is often
1-based; convert before handing files over). Matrix values are written with 17
significant digits, enough for a bit-exact round-trip of 64-bit floats.
"""

from __future__ import annotations

import math

import numpy as np

from .validation import check_matrix, check_permutation

__all__ = ["ParseError", "read_matrix_csv", "write_matrix_csv", "read_labels_csv",
           "write_labels_csv", "read_permutation_csv", "write_permutation_csv"]


class ParseError(ValueError):
    """Malformed input file; the message locates the offending row/column."""


def _read_lines(path) -> list[str]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError(f"{path}: file is empty")
    return lines


def read_matrix_csv(path) -> np.ndarray:
    """Read a headerless numeric CSV.

    Scientific notation is fine; LF and CRLF line endings both work. Ragged
    rows, non-numeric tokens, NaN/Inf values, and blank lines are rejected
    with 1-based row/column locations in the message.
    """
    lines = _read_lines(path)
    rows = []
    width = None
    for lineno, line in enumerate(lines, start=1):
        if line.strip() == "":
            raise ParseError(f"{path}:{lineno}: empty line")
        tokens = line.split(",")
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise ParseError(f"{path}:{lineno}: expected {width} columns, found {len(tokens)}")
        parsed = []
        for col, token in enumerate(tokens, start=1):
            try:
                value = float(token)
            except ValueError:
                raise ParseError(f"{path}:{lineno}:{col}: not a number: {token!r}") from None
            if not math.isfinite(value):
                raise ParseError(f"{path}:{lineno}:{col}: non-finite value: {token!r}")
            parsed.append(value)
        rows.append(parsed)
    return np.array(rows, dtype=np.float64)


def write_matrix_csv(a, path) -> None:
    a = check_matrix(a, "matrix")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in a:
            fh.write(",".join(f"{v:.17g}" for v in row))
            fh.write("\n")


def read_labels_csv(path) -> list[str]:
    """One label per line; tokens are kept byte-exact."""
    lines = _read_lines(path)
    for lineno, line in enumerate(lines, start=1):
        if line == "":
            raise ParseError(f"{path}:{lineno}: empty label")
    return lines


def write_labels_csv(labels, path) -> None:
    out = [str(label) for label in labels]
    for label in out:
        if "\n" in label or "\r" in label:
            raise ValueError(f"label contains a line break: {label!r}")
        if label == "":
            raise ValueError("empty labels cannot be serialized")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for label in out:
            fh.write(label)
            fh.write("\n")


def read_permutation_csv(path) -> np.ndarray:
    """Two 0-based columns ``source_index,matched_index``; validates a bijection."""
    lines = _read_lines(path)
    n = len(lines)
    pi = np.full(n, -1, dtype=np.int64)
    seen_source = np.zeros(n, dtype=bool)
    for lineno, line in enumerate(lines, start=1):
        tokens = line.split(",")
        if len(tokens) != 2:
            raise ParseError(
                f"{path}:{lineno}: expected 'source_index,matched_index', got {line!r}")
        try:
            src = int(tokens[0])
            dst = int(tokens[1])
        except ValueError:
            raise ParseError(f"{path}:{lineno}: indices must be integers, got {line!r}") from None
        if not 0 <= src < n:
            raise ParseError(f"{path}:{lineno}: source index {src} out of range 0..{n - 1}")
        if not 0 <= dst < n:
            raise ParseError(f"{path}:{lineno}: matched index {dst} out of range 0..{n - 1}")
        if seen_source[src]:
            raise ParseError(f"{path}:{lineno}: duplicate source index {src}")
        seen_source[src] = True
        pi[src] = dst
    counts = np.bincount(pi, minlength=n)
    if (counts != 1).any():
        dup = int(np.argmax(counts > 1))
        raise ParseError(f"{path}: matched index {dup} appears more than once (not a bijection)")
    return pi


def write_permutation_csv(pi, path) -> None:
    pi = check_permutation(pi)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for src, dst in enumerate(pi):
            fh.write(f"{src},{dst}\n")
