import numpy as np
import pytest
from hypothesis import given, strategies as st

from monolab.bitvec import BitVector, flip_bits
from monolab.functions import (
    LinearFunction,
    eval_binval,
    eval_linear,
    eval_onemax,
    random_linear_weights,
)

from conftest import bv


def test_onemax_example():
    assert eval_onemax(bv("1101")) == 3


def test_binval_example():
    assert eval_binval(bv("1000")) > eval_binval(bv("0111"))
    assert eval_binval(bv("1000")).to_int() == 8
    assert eval_binval(bv("0111")).to_int() == 7


def test_linear_example():
    assert eval_linear(bv("101"), np.array([3, 5, 2])) == 5


def test_linear_rejects_nonpositive_weights():
    with pytest.raises(ValueError):
        eval_linear(bv("101"), np.array([3, 0, 2]))
    with pytest.raises(ValueError):
        LinearFunction(3, np.array([1, -2, 3]))


@given(st.integers(1, 20), st.data())
def test_binval_order_matches_big_integer(n, data):
    """Ordering must agree with the exact value sum 2^(n-1-i) x_i."""
    a = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    b = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    exact_a = int("".join(map(str, a)), 2)
    exact_b = int("".join(map(str, b)), 2)
    fa, fb = eval_binval(BitVector.from_bits(a)), eval_binval(BitVector.from_bits(b))
    assert (fa < fb) == (exact_a < exact_b)
    assert (fa == fb) == (exact_a == exact_b)
    assert fa.to_int() == exact_a


def test_binval_total_order_reflexive():
    f = eval_binval(bv("1010"))
    g = eval_binval(bv("1010"))
    assert f == g and not f < g and not g < f


def test_linear_strict_monotonicity_randomized():
    """Flipping any single 0 -> 1 strictly increases every positive-weight
    linear function; >= 10^3 random (weights, point, bit) cases."""
    rng = np.random.default_rng(1234)
    checked = 0
    while checked < 1000:
        n = int(rng.integers(2, 40))
        w = random_linear_weights(n, rng)
        bits = rng.integers(0, 2, size=n, dtype=np.uint8)
        zeros = np.nonzero(bits == 0)[0]
        if zeros.size == 0:
            continue
        x = BitVector.from_bits(bits)
        i = int(rng.choice(zeros))
        y = flip_bits(x, [i])
        assert eval_linear(y, w) > eval_linear(x, w)
        checked += 1


def test_random_weights_range():
    rng = np.random.default_rng(0)
    w = random_linear_weights(50, rng)
    assert w.min() >= 1 and w.max() <= 2500


def test_function_objects_report_optimum():
    f = LinearFunction.random(10, seed=3)
    assert f.is_optimal(BitVector.ones(10))
    assert not f.is_optimal(BitVector.zeros(10))
