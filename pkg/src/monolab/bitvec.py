"""Bit-string search points with a cached ones-count.

Bits are packed MSB-first into a uint8 array (bit i lives in byte i >> 3 at
mask 1 << (7 - (i & 7))), so the byte sequence compares lexicographically in
the same order as the bit string. Values are immutable; ``flip_bits`` returns
a new value with the ones-count cache updated incrementally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BitVector",
    "Density",
    "ones_count",
    "flip_bits",
    "density",
]


class BitVector:
    """Fixed-length bit string; length and content are immutable."""

    __slots__ = ("n", "_bytes", "_ones")

    def __init__(self, n: int, packed: np.ndarray, ones: int):
        if n <= 0:
            raise ValueError(f"dimension must be positive, got {n}")
        self.n = n
        self._bytes = packed
        self._ones = ones

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_bits(cls, bits: Sequence[int] | np.ndarray) -> "BitVector":
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("bits must be a non-empty 1-d sequence")
        if np.any(arr > 1):
            raise ValueError("bits must be 0/1")
        packed = np.packbits(arr, bitorder="big")
        return cls(arr.size, packed, int(arr.sum()))

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(n, np.zeros((n + 7) // 8, dtype=np.uint8), 0)

    @classmethod
    def ones(cls, n: int) -> "BitVector":
        return cls.from_bits(np.ones(n, dtype=np.uint8))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "BitVector":
        return cls.from_bits(rng.integers(0, 2, size=n, dtype=np.uint8))

    # -- accessors ---------------------------------------------------------

    @property
    def ones_count(self) -> int:
        return self._ones

    def bit(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"bit index {i} out of range for n={self.n}")
        return (int(self._bytes[i >> 3]) >> (7 - (i & 7))) & 1

    def to_array(self) -> np.ndarray:
        """Bits as a uint8 array of length n."""
        return np.unpackbits(self._bytes, count=self.n, bitorder="big")

    def packed_bytes(self) -> bytes:
        """Packed representation; lexicographic byte order == bit-string order."""
        return self._bytes.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._bytes, other._bytes)

    def __hash__(self) -> int:
        return hash((self.n, self._bytes.tobytes()))

    def __repr__(self) -> str:
        if self.n <= 64:
            s = "".join(str(self.bit(i)) for i in range(self.n))
            return f"BitVector({s})"
        return f"BitVector(n={self.n}, ones={self._ones})"


def ones_count(x: BitVector) -> int:
    """Number of one-bits in x."""
    return x.ones_count


def flip_bits(x: BitVector, indices: Iterable[int]) -> BitVector:
    """Copy of x with exactly the given positions toggled.

    ``indices`` must not contain duplicates (a duplicated index would undo
    itself and desynchronise the ones-count contract).
    """
    idx = list(indices)
    if not idx:
        return x
    seen = set(idx)
    if len(seen) != len(idx):
        raise ValueError("duplicate flip indices")
    packed = x._bytes.copy()
    ones = x._ones
    for i in idx:
        if not 0 <= i < x.n:
            raise IndexError(f"flip index {i} out of range for n={x.n}")
        mask = 1 << (7 - (i & 7))
        byte = int(packed[i >> 3])
        ones += -1 if byte & mask else 1
        packed[i >> 3] = byte ^ mask
    return BitVector(x.n, packed, ones)


@dataclass(frozen=True)
class Density:
    """Fraction of zero-bits in an index set, exact."""

    value: Fraction

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise ValueError(f"density outside [0,1]: {self.value}")

    def __float__(self) -> float:
        return float(self.value)


def density(x: BitVector, index_set: Iterable[int]) -> Density:
    """Fraction of zero-bits of x inside a non-empty index set."""
    idx = list(index_set)
    if not idx:
        raise ValueError("density of an empty index set is undefined")
    zeros = sum(1 - x.bit(i) for i in idx)
    return Density(Fraction(zeros, len(idx)))
