from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from monolab.bitvec import BitVector, density, flip_bits, ones_count

from conftest import bv


def test_ones_count_examples():
    assert ones_count(BitVector.zeros(8)) == 0
    assert ones_count(BitVector.ones(8)) == 8
    assert ones_count(bv("10110000")) == 3


def test_flip_bits_examples():
    x = flip_bits(BitVector.zeros(4), {1, 3})
    assert x == bv("0101")
    assert x.ones_count == 2
    y = bv("1011")
    assert flip_bits(y, set()) is y
    assert flip_bits(BitVector.ones(4), {0, 1, 2, 3}) == BitVector.zeros(4)


def test_flip_bits_errors():
    with pytest.raises(IndexError):
        flip_bits(BitVector.zeros(4), {4})
    with pytest.raises(ValueError):
        flip_bits(BitVector.zeros(4), [1, 1])


def test_density_examples():
    assert float(density(BitVector.ones(6), [0, 3, 5])) == 0.0
    assert float(density(BitVector.zeros(6), [1, 2])) == 1.0
    assert density(bv("1010"), [0, 1, 2, 3]).value == Fraction(1, 2)
    with pytest.raises(ValueError):
        density(bv("1010"), [])


bits_strategy = st.lists(st.integers(0, 1), min_size=1, max_size=200)


@given(bits_strategy, st.data())
def test_flip_involution(bits, data):
    x = BitVector.from_bits(bits)
    k = data.draw(st.integers(0, len(bits)))
    idx = data.draw(st.permutations(range(len(bits))))[:k]
    y = flip_bits(flip_bits(x, idx), idx)
    assert y == x
    assert y.ones_count == x.ones_count


@given(bits_strategy)
def test_ones_cache_matches_array(bits):
    x = BitVector.from_bits(bits)
    assert x.ones_count == int(x.to_array().sum())
    assert x.ones_count == sum(bits)


@given(bits_strategy, st.data())
def test_flip_updates_cache(bits, data):
    x = BitVector.from_bits(bits)
    k = data.draw(st.integers(0, len(bits)))
    idx = data.draw(st.permutations(range(len(bits))))[:k]
    y = flip_bits(x, idx)
    assert y.ones_count == int(y.to_array().sum())
    # original untouched (immutability)
    assert x.ones_count == sum(bits)


def test_packed_roundtrip_and_length_guard():
    x = bv("110100101")
    assert x.n == 9
    assert [x.bit(i) for i in range(9)] == [1, 1, 0, 1, 0, 0, 1, 0, 1]
    with pytest.raises(ValueError):
        BitVector.from_bits([])
    with pytest.raises(ValueError):
        BitVector.from_bits([0, 2])
