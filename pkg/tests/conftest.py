from fractions import Fraction

import numpy as np
import pytest

from monolab.bitvec import BitVector
from monolab.hottopic import HotTopicInstance, HotTopicParams, build_instance


def slow_ht_eval(inst: HotTopicInstance, bits: np.ndarray) -> int:
    """Independent full-scan evaluation straight from the level sets.

    No caches, no bitmaps, exact rational threshold; the oracle side of the
    dual-route check for the production evaluator.
    """
    p = inst.params
    thr = Fraction(p.eps_level) * Fraction(p.beta) * p.n
    lvl = 0
    for i in range(1, p.num_levels + 1):
        _, b = inst.level_sets(i)
        zeros = int((bits[b] == 0).sum())
        if zeros <= thr:
            lvl = i
    if lvl < p.num_levels:
        a_next = set(inst.level_sets(lvl + 1)[0].tolist())
    else:
        a_next = set()
    val = lvl * p.n * p.n
    for i in range(p.n):
        if bits[i]:
            val += p.n if i in a_next else 1
    return val


def slow_ht_level(inst: HotTopicInstance, bits: np.ndarray) -> int:
    p = inst.params
    thr = Fraction(p.eps_level) * Fraction(p.beta) * p.n
    lvl = 0
    for i in range(1, p.num_levels + 1):
        _, b = inst.level_sets(i)
        if int((bits[b] == 0).sum()) <= thr:
            lvl = i
    return lvl


def bv(s: str) -> BitVector:
    return BitVector.from_bits([int(ch) for ch in s])


@pytest.fixture(scope="session")
def small_instance() -> HotTopicInstance:
    return build_instance(
        HotTopicParams(n=64, alpha=0.3, beta=0.1, eps_level=0.2, num_levels=8, master_seed=42)
    )
