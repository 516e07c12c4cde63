"""Deterministic seed derivation for instances, levels and runs.

All substreams are derived with numpy's SeedSequence so that stream i can be
constructed without touching streams < i (counter-based, order independent).
"""

from __future__ import annotations

import numpy as np

__all__ = ["substream", "substream_rng", "substream_u32"]


def substream(master_seed: int, *path: int) -> np.random.SeedSequence:
    """SeedSequence for the substream identified by ``path`` under a master seed."""
    return np.random.SeedSequence(master_seed, spawn_key=tuple(path))


def substream_rng(master_seed: int, *path: int) -> np.random.Generator:
    """Fresh PCG64 generator for a substream."""
    return np.random.Generator(np.random.PCG64(substream(master_seed, *path)))


def substream_u32(master_seed: int, *path: int) -> int:
    """A single 32-bit word derived from a substream (kernel seeding)."""
    return int(substream(master_seed, *path).generate_state(1, np.uint32)[0])
