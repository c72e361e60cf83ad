"""Seeded, keyed random streams on the counter-based Philox generator.

Streams derived from the same seed with distinct keys are statistically
independent, and a stream's output depends only on (seed, key) -- never on
scheduling order -- which keeps parallel simulation reproducible.
"""

from __future__ import annotations

import numpy as np

__all__ = ["make_generator", "stream_generator"]


def make_generator(seed: int) -> np.random.Generator:
    """Root generator for ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def stream_generator(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for (seed, key), e.g. key = (axis_index, rep)."""
    seq = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(seq))
