"""Seeded hard-instance generator with level sets, plus exact evaluation.

An instance consists of L level sets A_i of size floor(alpha*n) with nested
trigger sets B_i of size floor(beta*n). The level of a point is the largest
index whose trigger set contains at most eps_level*beta*n zero-bits, and the
fitness is

    level * n^2 + n * (ones inside A_{level+1}) + (ones outside A_{level+1}),

with A_{L+1} empty, so the all-ones string is the unique maximum.

Level sets are generated lazily from independent per-level substreams of the
master seed, so materialisation order never changes the sets. Incremental
evaluation keeps per-level zero-counts and touches only the levels whose
trigger sets contain a flipped position.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .bitvec import BitVector, flip_bits
from .seeds import substream_rng

__all__ = [
    "HotTopicParams",
    "HotTopicInstance",
    "LevelState",
    "HotTopicFunction",
    "build_instance",
    "level",
    "eval_ht",
    "eval_ht_incremental",
]


@dataclass(frozen=True)
class HotTopicParams:
    n: int
    alpha: float
    beta: float
    eps_level: float
    num_levels: int
    master_seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not 0 < self.beta <= self.alpha < 1:
            raise ValueError(f"need 0 < beta <= alpha < 1, got alpha={self.alpha} beta={self.beta}")
        if not 0 < self.eps_level < 1:
            raise ValueError(f"eps_level must be in (0,1), got {self.eps_level}")
        if self.num_levels < 1:
            raise ValueError("num_levels must be >= 1")
        if self.set_size_b < 1:
            raise ValueError(f"floor(beta*n) = 0 for beta={self.beta}, n={self.n}")

    @property
    def set_size_a(self) -> int:
        return int(self.alpha * self.n)

    @property
    def set_size_b(self) -> int:
        return int(self.beta * self.n)

    @property
    def zero_threshold(self) -> int:
        """Largest integer zero-count passing the level test.

        The test is `count <= eps_level*beta*n` with the product taken exactly
        over the given float parameters (Fraction avoids double rounding), so
        for integers it reduces to `count <= floor(eps_level*beta*n)`.
        """
        exact = Fraction(self.eps_level) * Fraction(self.beta) * self.n
        return math.floor(exact)


class HotTopicInstance:
    """Lazily materialised level sets with packed membership bitmaps.

    Thread-safe: concurrent evaluators may share one instance; a lock guards
    materialisation and each level is generated exactly once.
    """

    def __init__(self, params: HotTopicParams):
        self.params = params
        self._nbytes = (params.n + 7) // 8
        self._lock = threading.Lock()
        self._levels: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        # packed membership rows, row i-1 describes level i
        self._a_masks = np.zeros((params.num_levels, self._nbytes), dtype=np.uint8)
        self._b_masks = np.zeros((params.num_levels, self._nbytes), dtype=np.uint8)
        self._csr_cache: tuple[np.ndarray, np.ndarray] | None = None

    # -- materialisation ---------------------------------------------------

    def _generate(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        p = self.params
        rng = substream_rng(p.master_seed, i)
        a = np.sort(rng.choice(p.n, size=p.set_size_a, replace=False)).astype(np.int32)
        b = np.sort(rng.choice(a, size=p.set_size_b, replace=False)).astype(np.int32)
        return a, b

    def level_sets(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """(A_i, B_i) as sorted index arrays, 1-indexed, materialised on demand."""
        if not 1 <= i <= self.params.num_levels:
            raise IndexError(f"level index {i} outside [1, {self.params.num_levels}]")
        got = self._levels.get(i)
        if got is not None:
            return got
        with self._lock:
            got = self._levels.get(i)
            if got is not None:
                return got
            a, b = self._generate(i)
            row = np.zeros(self._nbytes * 8, dtype=np.uint8)
            row[a] = 1
            self._a_masks[i - 1] = np.packbits(row, bitorder="big")
            row[:] = 0
            row[b] = 1
            self._b_masks[i - 1] = np.packbits(row, bitorder="big")
            self._csr_cache = None
            self._levels[i] = (a, b)
            return a, b

    def materialize_all(self) -> None:
        for i in range(1, self.params.num_levels + 1):
            self.level_sets(i)

    # -- reverse indexes ---------------------------------------------------

    def a_mask(self, i: int) -> np.ndarray:
        """Packed membership bitmap of A_i (1-indexed)."""
        self.level_sets(i)
        return self._a_masks[i - 1]

    def b_mask(self, i: int) -> np.ndarray:
        self.level_sets(i)
        return self._b_masks[i - 1]

    def levels_of_b_position(self, pos: int) -> np.ndarray:
        """Levels i whose B_i contains the position (CSR row of the reverse index)."""
        indptr, data = self.b_reverse_csr()
        return data[indptr[pos] : indptr[pos + 1]]

    def levels_of_a_position(self, pos: int) -> list[int]:
        """Levels i whose A_i contains the position."""
        self.materialize_all()
        byte, shift = pos >> 3, 7 - (pos & 7)
        col = (self._a_masks[:, byte] >> shift) & 1
        return [int(i) + 1 for i in np.nonzero(col)[0]]

    def b_reverse_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Position -> B-levels map as (indptr, data) int32 arrays."""
        if self._csr_cache is None:
            self.materialize_all()
            p = self.params
            counts = np.zeros(p.n + 1, dtype=np.int32)
            for i in range(1, p.num_levels + 1):
                counts[self._levels[i][1] + 1] += 1
            indptr = np.cumsum(counts, dtype=np.int32)
            data = np.empty(indptr[-1], dtype=np.int32)
            fill = indptr[:-1].copy()
            for i in range(1, p.num_levels + 1):
                for pos in self._levels[i][1]:
                    data[fill[pos]] = i
                    fill[pos] += 1
            self._csr_cache = (indptr, data)
        return self._csr_cache

    def index_nbytes(self) -> int:
        """Memory held by the packed membership bitmaps."""
        return self._a_masks.nbytes + self._b_masks.nbytes

    def validate(self) -> None:
        """Debug check: set sizes, nesting, and bitmap/reverse-index agreement."""
        p = self.params
        for i, (a, b) in self._levels.items():
            assert a.size == p.set_size_a and b.size == p.set_size_b
            assert np.all(np.isin(b, a)), f"B_{i} not a subset of A_{i}"
            assert np.unique(a).size == a.size
            arow = np.unpackbits(self._a_masks[i - 1], count=p.n, bitorder="big")
            brow = np.unpackbits(self._b_masks[i - 1], count=p.n, bitorder="big")
            assert np.array_equal(np.nonzero(arow)[0], a)
            assert np.array_equal(np.nonzero(brow)[0], b)
        if self._csr_cache is not None:
            indptr, data = self._csr_cache
            for pos in range(p.n):
                expect = sorted(i for i, (_, b) in self._levels.items() if pos in set(b.tolist()))
                got = sorted(data[indptr[pos] : indptr[pos + 1]].tolist())
                assert got == expect, f"reverse index mismatch at position {pos}"

    # -- serialisation -----------------------------------------------------

    def dump_json(self, path) -> None:
        """Parameters plus explicit sets, for cross-implementation checks."""
        self.materialize_all()
        doc = {
            "params": {
                "n": self.params.n,
                "alpha": self.params.alpha,
                "beta": self.params.beta,
                "eps_level": self.params.eps_level,
                "num_levels": self.params.num_levels,
                "master_seed": self.params.master_seed,
                "zero_threshold": self.params.zero_threshold,
            },
            "levels": [
                {
                    "A": self._levels[i][0].tolist(),
                    "B": self._levels[i][1].tolist(),
                }
                for i in range(1, self.params.num_levels + 1)
            ],
        }
        with open(path, "w") as fh:
            json.dump(doc, fh)


def build_instance(params: HotTopicParams) -> HotTopicInstance:
    return HotTopicInstance(params)


# -- evaluation --------------------------------------------------------------


def _zero_counts(inst: HotTopicInstance, x: BitVector) -> np.ndarray:
    """z[i] = zero-bits of x inside B_i, for all i; z[0] unused."""
    inst.materialize_all()
    xb = np.frombuffer(x.packed_bytes(), dtype=np.uint8)
    ones_in_b = np.bitwise_count(inst._b_masks & xb[None, :]).sum(axis=1)
    z = np.empty(inst.params.num_levels + 1, dtype=np.int32)
    z[0] = 0
    z[1:] = inst.params.set_size_b - ones_in_b
    return z


def _level_from_z(z: np.ndarray, threshold: int, num_levels: int) -> int:
    ok = np.nonzero(z[1:] <= threshold)[0]
    return int(ok[-1]) + 1 if ok.size else 0


def level(inst: HotTopicInstance, x: BitVector) -> int:
    """Largest level whose trigger set holds at most the threshold of zero-bits."""
    if x.n != inst.params.n:
        raise ValueError("dimension mismatch")
    z = _zero_counts(inst, x)
    return _level_from_z(z, inst.params.zero_threshold, inst.params.num_levels)


def _ones_in_a(inst: HotTopicInstance, x: BitVector, lvl: int) -> int:
    """Ones of x inside A_{lvl+1}; empty set for lvl = L."""
    if lvl >= inst.params.num_levels:
        return 0
    xb = np.frombuffer(x.packed_bytes(), dtype=np.uint8)
    return int(np.bitwise_count(inst.a_mask(lvl + 1) & xb).sum())


def _value(inst: HotTopicInstance, lvl: int, ones_a: int, ones_total: int) -> int:
    n = inst.params.n
    return lvl * n * n + n * ones_a + (ones_total - ones_a)


def eval_ht(inst: HotTopicInstance, x: BitVector) -> int:
    """Exact fitness; integer, at most num_levels*n^2 + n."""
    if x.n != inst.params.n:
        raise ValueError("dimension mismatch")
    lvl = level(inst, x)
    return _value(inst, lvl, _ones_in_a(inst, x, lvl), x.ones_count)


@dataclass
class LevelState:
    """Per-point cache for incremental evaluation: zero-counts and level."""

    point: BitVector
    z: np.ndarray
    level: int

    @classmethod
    def from_point(cls, inst: HotTopicInstance, x: BitVector) -> "LevelState":
        z = _zero_counts(inst, x)
        return cls(x, z, _level_from_z(z, inst.params.zero_threshold, inst.params.num_levels))

    def check_consistency(self, inst: HotTopicInstance) -> None:
        """Full-recount oracle; raises on any drift from the reference point."""
        z = _zero_counts(inst, self.point)
        if not np.array_equal(z, self.z):
            raise RuntimeError("LevelState zero-counts out of sync with reference point")
        lvl = _level_from_z(z, inst.params.zero_threshold, inst.params.num_levels)
        if lvl != self.level:
            raise RuntimeError("LevelState level out of sync with reference point")


def eval_ht_incremental(
    inst: HotTopicInstance,
    state: LevelState,
    flipped: Iterable[int],
    debug: bool = False,
) -> tuple[int, LevelState]:
    """Fitness of state.point with ``flipped`` toggled, plus the updated state.

    Touches only the zero-counts of levels whose trigger set contains a
    flipped position; the level is re-derived by a downward scan only when a
    count crossed the threshold.
    """
    if debug:
        state.check_consistency(inst)
    p = inst.params
    flips = list(flipped)
    if not flips:
        ones_a = _ones_in_a(inst, state.point, state.level)
        return _value(inst, state.level, ones_a, state.point.ones_count), state

    indptr, data = inst.b_reverse_csr()
    z = state.z.copy()
    thr = p.zero_threshold
    crossed = False
    for pos in flips:
        was_one = state.point.bit(pos)
        delta = 1 if was_one else -1
        for lv in data[indptr[pos] : indptr[pos + 1]]:
            old = z[lv]
            z[lv] = old + delta
            crossed = crossed or ((old <= thr) != (z[lv] <= thr))
    new_level = _level_from_z(z, thr, p.num_levels) if crossed else state.level

    new_point = flip_bits(state.point, flips)
    new_state = LevelState(new_point, z, new_level)
    ones_a = _ones_in_a(inst, new_point, new_level)
    return _value(inst, new_level, ones_a, new_point.ones_count), new_state


@dataclass(frozen=True)
class HotTopicFunction:
    """Fitness-oracle wrapper used by the run engines."""

    instance: HotTopicInstance
    kind: str = field(default="hottopic", init=False)

    @property
    def n(self) -> int:
        return self.instance.params.n

    def evaluate(self, x: BitVector) -> int:
        return eval_ht(self.instance, x)

    def is_optimal(self, x: BitVector) -> bool:
        return x.ones_count == self.n

    def level_of(self, x: BitVector) -> int:
        return level(self.instance, x)
