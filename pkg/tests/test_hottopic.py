import json

import numpy as np
import pytest

from monolab.bitvec import BitVector, flip_bits
from monolab.hottopic import (
    HotTopicParams,
    LevelState,
    build_instance,
    eval_ht,
    eval_ht_incremental,
    level,
)

from conftest import slow_ht_eval, slow_ht_level


def params(**kw):
    base = dict(n=100, alpha=0.25, beta=0.05, eps_level=0.05, num_levels=10, master_seed=1)
    base.update(kw)
    return HotTopicParams(**base)


# -- construction --------------------------------------------------------------

def test_size_contract():
    inst = build_instance(params(master_seed=3))
    for i in (1, 5, 10):
        a, b = inst.level_sets(i)
        assert a.size == 25 and b.size == 5
        assert np.all(np.isin(b, a))


def test_same_seed_same_sets():
    p = params(master_seed=99)
    one, two = build_instance(p), build_instance(p)
    for i in range(1, 11):
        a1, b1 = one.level_sets(i)
        a2, b2 = two.level_sets(i)
        assert np.array_equal(a1, a2) and np.array_equal(b1, b2)


def test_distinct_seeds_distinct_sets():
    differing = 0
    for s in range(100):
        a1, _ = build_instance(params(master_seed=2 * s)).level_sets(1)
        a2, _ = build_instance(params(master_seed=2 * s + 1)).level_sets(1)
        if not np.array_equal(a1, a2):
            differing += 1
    assert differing >= 99


def test_lazy_materialisation_order_independent():
    p = params(master_seed=17)
    forward, backward = build_instance(p), build_instance(p)
    fw = [forward.level_sets(i) for i in range(1, 11)]
    bw = [backward.level_sets(i) for i in range(10, 0, -1)][::-1]
    for (a1, b1), (a2, b2) in zip(fw, bw):
        assert np.array_equal(a1, a2) and np.array_equal(b1, b2)


def test_invalid_params_rejected():
    with pytest.raises(ValueError):
        params(beta=0.3, alpha=0.2)  # beta > alpha
    with pytest.raises(ValueError):
        params(n=10, beta=0.05)  # floor(beta*n) = 0
    with pytest.raises(ValueError):
        params(eps_level=0.0)
    with pytest.raises(ValueError):
        params(num_levels=0)


def test_validate_and_reverse_index_agreement():
    inst = build_instance(params(master_seed=23))
    inst.b_reverse_csr()
    inst.validate()
    # spot-check the reverse maps against the sets
    for i in range(1, 11):
        a, b = inst.level_sets(i)
        for pos in b[:2]:
            assert i in inst.levels_of_b_position(int(pos)).tolist()
        for pos in a[:2]:
            assert i in inst.levels_of_a_position(int(pos))


# -- level and fitness ----------------------------------------------------------

def test_level_all_ones_is_max():
    inst = build_instance(params())
    assert level(inst, BitVector.ones(100)) == 10


def test_level_all_zeros_is_zero():
    p = params()  # threshold floor(0.05*0.05*100) = 0 < floor(beta n) = 5
    inst = build_instance(p)
    assert p.zero_threshold < p.set_size_b
    assert level(inst, BitVector.zeros(100)) == 0


def test_level_threshold_is_exact_real_product():
    # eps*beta*n = 25 exactly at the reference scale: 25 zeros pass, 26 fail
    p = HotTopicParams(n=10_000, alpha=0.25, beta=0.05, eps_level=0.05,
                       num_levels=8, master_seed=5)
    assert p.zero_threshold == 25


def test_level_against_full_scan_oracle_constructed_point():
    # zero out 26 members of B_7 (just above threshold 25 is impossible at
    # n=100 scale, so use the footnote scale with few levels)
    p = HotTopicParams(n=10_000, alpha=0.25, beta=0.05, eps_level=0.05,
                       num_levels=8, master_seed=5)
    inst = build_instance(p)
    _, b7 = inst.level_sets(7)
    x = flip_bits(BitVector.ones(p.n), b7[:26].tolist())  # those bits become 0
    bits = x.to_array()
    assert level(inst, x) == slow_ht_level(inst, bits)
    # level 7 itself must fail its trigger test
    assert int((bits[b7] == 0).sum()) == 26 > p.zero_threshold


def test_eval_matches_slow_reimplementation_random_points():
    p = HotTopicParams(n=64, alpha=0.3, beta=0.1, eps_level=0.2, num_levels=6,
                       master_seed=11)
    inst = build_instance(p)
    rng = np.random.default_rng(0)
    for _ in range(150):
        bits = rng.integers(0, 2, size=64, dtype=np.uint8)
        x = BitVector.from_bits(bits)
        assert eval_ht(inst, x) == slow_ht_eval(inst, bits)


def test_eval_all_ones_and_zeros():
    p = params()
    inst = build_instance(p)
    assert eval_ht(inst, BitVector.ones(100)) == 10 * 100 * 100 + 100
    assert eval_ht(inst, BitVector.zeros(100)) == 0  # level 0, no ones


# -- incremental path ------------------------------------------------------------

def test_incremental_empty_batch_is_identity(small_instance):
    rng = np.random.default_rng(5)
    x = BitVector.random(64, rng)
    st = LevelState.from_point(small_instance, x)
    v, st2 = eval_ht_incremental(small_instance, st, [])
    assert v == eval_ht(small_instance, x)
    assert st2 is st


def test_incremental_single_outside_flip_increments(small_instance):
    # a 0->1 flip outside every A_i at an unchanged level adds exactly 1
    inst = small_instance
    p = inst.params
    inst.materialize_all()
    in_any_a = set()
    for i in range(1, p.num_levels + 1):
        in_any_a.update(inst.level_sets(i)[0].tolist())
    outside = [i for i in range(p.n) if i not in in_any_a]
    assert outside, "instance unexpectedly covers all positions"
    x = flip_bits(BitVector.ones(p.n), outside[:1])  # zero at an outside position
    st = LevelState.from_point(inst, x)
    before = eval_ht(inst, x)
    v, _ = eval_ht_incremental(inst, st, outside[:1])
    assert v == before + 1


def test_incremental_matches_full_on_random_batches(small_instance):
    rng = np.random.default_rng(21)
    x = BitVector.random(64, rng)
    st = LevelState.from_point(small_instance, x)
    for _ in range(3000):
        k = int(rng.integers(0, 7))
        flips = rng.choice(64, size=k, replace=False).tolist()
        v, st = eval_ht_incremental(small_instance, st, flips, debug=False)
        assert v == eval_ht(small_instance, st.point)
    st.check_consistency(small_instance)


def test_incremental_debug_detects_corruption(small_instance):
    rng = np.random.default_rng(2)
    x = BitVector.random(64, rng)
    st = LevelState.from_point(small_instance, x)
    st.z[1] += 1
    with pytest.raises(RuntimeError):
        eval_ht_incremental(small_instance, st, [3], debug=True)


# -- monotonicity ------------------------------------------------------------------

def test_level_monotone_under_zero_to_one_flips(small_instance):
    rng = np.random.default_rng(9)
    for _ in range(300):
        bits = rng.integers(0, 2, size=64, dtype=np.uint8)
        zeros = np.nonzero(bits == 0)[0]
        if zeros.size == 0:
            continue
        x = BitVector.from_bits(bits)
        y = flip_bits(x, [int(rng.choice(zeros))])
        assert level(small_instance, y) >= level(small_instance, x)


def test_strict_monotonicity_sampled():
    rng = np.random.default_rng(31)
    for trial in range(60):
        n = int(rng.integers(8, 80))
        beta = float(rng.uniform(1.5 / n, 0.3))
        alpha = float(rng.uniform(beta, 0.9))
        p = HotTopicParams(n=n, alpha=alpha, beta=beta,
                           eps_level=float(rng.uniform(0.05, 0.9)),
                           num_levels=int(rng.integers(1, 12)),
                           master_seed=int(rng.integers(0, 2**32)))
        inst = build_instance(p)
        bits = rng.integers(0, 2, size=n, dtype=np.uint8)
        zeros = np.nonzero(bits == 0)[0]
        if zeros.size == 0:
            continue
        x = BitVector.from_bits(bits)
        i = int(rng.choice(zeros))
        assert eval_ht(inst, flip_bits(x, [i])) > eval_ht(inst, x)


# -- resources and serialisation -----------------------------------------------------

def test_reverse_index_memory_and_build_time_at_reference_scale():
    import time

    t0 = time.perf_counter()
    p = HotTopicParams(n=10_000, alpha=0.25, beta=0.05, eps_level=0.05,
                       num_levels=100, master_seed=1)
    inst = build_instance(p)
    inst.materialize_all()
    inst.b_reverse_csr()
    elapsed = time.perf_counter() - t0
    assert inst.index_nbytes() < 1_000_000
    assert elapsed < 1.0


def test_dump_json_reconstructs_sets(tmp_path, small_instance):
    path = tmp_path / "instance.json"
    small_instance.dump_json(path)
    doc = json.loads(path.read_text())
    assert doc["params"]["n"] == 64
    assert len(doc["levels"]) == 8
    rebuilt = build_instance(HotTopicParams(
        n=doc["params"]["n"], alpha=doc["params"]["alpha"], beta=doc["params"]["beta"],
        eps_level=doc["params"]["eps_level"], num_levels=doc["params"]["num_levels"],
        master_seed=doc["params"]["master_seed"]))
    for i, lv in enumerate(doc["levels"], start=1):
        a, b = rebuilt.level_sets(i)
        assert lv["A"] == a.tolist() and lv["B"] == b.tolist()
