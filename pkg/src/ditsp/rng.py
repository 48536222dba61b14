"""Reproducible, splittable random streams.

Every stochastic component draws from a stream derived from a master seed
plus a tuple of integer indices (trial number, stage, ...).  Streams with
distinct index tuples never overlap, so trials can run on any number of
workers and still produce identical results.
"""

from __future__ import annotations

import numpy as np


def substream(master_seed: int, *indices: int) -> np.random.Generator:
    """Generator for the stream identified by ``(master_seed, *indices)``.

    Uses the SeedSequence spawn-key mechanism, which guarantees
    non-overlapping streams for distinct index tuples.
    """
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(i) for i in indices))
    return np.random.Generator(np.random.Philox(ss))
