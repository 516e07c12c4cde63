"""Benchmark fitness functions: OneMax, BinVal, random-weight linear.

Fitness values only ever flow through comparisons, so BinVal returns a
lexicographic-order token instead of the 2^n-scale integer. All functions
here are strictly monotone: flipping any 0 to 1 strictly increases fitness,
and the unique optimum is the all-ones string.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .bitvec import BitVector

__all__ = [
    "LexFitness",
    "eval_onemax",
    "eval_binval",
    "eval_linear",
    "OneMax",
    "BinVal",
    "LinearFunction",
    "random_linear_weights",
]


@functools.total_ordering
class LexFitness:
    """Totally ordered fitness token: compares like the underlying bit string.

    Bytes are the MSB-first packing of the bits, so byte-wise lexicographic
    order equals bit-string lexicographic order (bit 0 most significant).
    """

    __slots__ = ("key", "_n")

    def __init__(self, key: bytes, n: int):
        self.key = key
        self._n = n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LexFitness):
            return NotImplemented
        return self.key == other.key

    def __lt__(self, other: "LexFitness") -> bool:
        return self.key < other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def to_int(self) -> int:
        """Exact value sum(2^(n-1-i) * x_i); only for reporting, never for selection."""
        pad = 8 * len(self.key) - self._n
        return int.from_bytes(self.key, "big") >> pad

    def __repr__(self) -> str:
        return f"LexFitness({self.to_int()})"


def eval_onemax(x: BitVector) -> int:
    """Number of one-bits."""
    return x.ones_count


def eval_binval(x: BitVector) -> LexFitness:
    """Order-preserving BinVal token (MSB = bit 0)."""
    return LexFitness(x.packed_bytes(), x.n)


def eval_linear(x: BitVector, weights: np.ndarray) -> int:
    """Sum of weights over one-bits; weights must be strictly positive integers."""
    w = np.asarray(weights)
    if w.shape != (x.n,):
        raise ValueError(f"weights shape {w.shape} does not match n={x.n}")
    if np.any(w <= 0):
        raise ValueError("linear weights must be strictly positive")
    return int(w[x.to_array() == 1].sum())


def random_linear_weights(n: int, rng: np.random.Generator) -> np.ndarray:
    """Integer weights drawn uniformly from {1, ..., n^2}."""
    return rng.integers(1, n * n + 1, size=n, dtype=np.int64)


# -- function objects consumed by the run engines ---------------------------


@dataclass(frozen=True)
class OneMax:
    n: int
    kind: str = field(default="onemax", init=False)

    def evaluate(self, x: BitVector) -> int:
        return eval_onemax(x)

    def is_optimal(self, x: BitVector) -> bool:
        return x.ones_count == self.n


@dataclass(frozen=True)
class BinVal:
    n: int
    kind: str = field(default="binval", init=False)

    def evaluate(self, x: BitVector) -> LexFitness:
        return eval_binval(x)

    def is_optimal(self, x: BitVector) -> bool:
        return x.ones_count == self.n


@dataclass(frozen=True)
class LinearFunction:
    n: int
    weights: np.ndarray
    kind: str = field(default="linear", init=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.int64)
        if w.shape != (self.n,):
            raise ValueError("weights length must equal n")
        if np.any(w <= 0):
            raise ValueError("linear weights must be strictly positive")
        object.__setattr__(self, "weights", w)

    @classmethod
    def random(cls, n: int, seed: int) -> "LinearFunction":
        rng = np.random.Generator(np.random.PCG64(seed))
        return cls(n, random_linear_weights(n, rng))

    def evaluate(self, x: BitVector) -> int:
        return eval_linear(x, self.weights)

    def is_optimal(self, x: BitVector) -> bool:
        return x.ones_count == self.n
