import math

import numpy as np
import pytest

from monolab.flipdist import (
    BinomialFlips,
    PointMass,
    PoissonFlips,
    TableFlips,
    ZipfFlips,
    moments,
    parse_dist,
    pmf,
    sample,
)


def rng(seed=0):
    return np.random.default_rng(seed)


# -- pmf ----------------------------------------------------------------------

def test_pointmass_pmf():
    d = PointMass(3)
    assert pmf(d, 3) == 1.0
    assert pmf(d, 2) == 0.0 and pmf(d, 4) == 0.0


def test_poisson_pmf_closed_form():
    assert pmf(PoissonFlips(1.0), 0) == pytest.approx(math.exp(-1), abs=1e-12)


def test_zipf_pmf_basel_limit():
    # for kappa = 2 and a large cap, Pr[s=1] -> 6/pi^2
    d = ZipfFlips(2.0, 10**6)
    assert pmf(d, 1) == pytest.approx(6 / math.pi**2, abs=1e-3)


@pytest.mark.parametrize("d", [
    PointMass(3),
    BinomialFlips(100, 1.5),
    ZipfFlips(1.5, 1000),
    TableFlips([0.2, 0.3, 0.0, 0.5]),
])
def test_pmf_sums_to_one(d):
    total = d.pmf_block(0, d.support_max + 1).sum()
    assert abs(total - 1.0) < 1e-12


def test_poisson_pmf_sums_to_one_numerically():
    d = PoissonFlips(2.0)
    assert abs(d.pmf_block(0, 200).sum() - 1.0) < 1e-12


# -- moments ------------------------------------------------------------------

def test_poisson_moments_closed_and_summed():
    rep = moments(PoissonFlips(2.0))
    assert rep.m1 == pytest.approx(2.0, abs=1e-12)
    assert rep.m2 == pytest.approx(4.0, abs=1e-12)
    # cross-check by direct summation to negligible tail
    ks = np.arange(0, 300, dtype=float)
    ps = PoissonFlips(2.0).pmf_block(0, 300)
    assert np.dot(ps, ks) == pytest.approx(2.0, abs=1e-10)
    assert np.dot(ps, ks * (ks - 1)) == pytest.approx(4.0, abs=1e-10)


def test_pointmass_moments():
    rep = moments(PointMass(3))
    assert (rep.m1, rep.m2) == (3.0, 6.0)


def test_table_moments_and_s0_example():
    d = TableFlips([0.0, 0.5, 0.0, 0.5])  # half single flips, half triple flips
    rep = moments(d)
    assert rep.m1 == pytest.approx(2.0)
    assert rep.m2 == pytest.approx(3.0)
    assert rep.m2_over_m1 == pytest.approx(1.5)
    assert rep.m2_trunc(3) == pytest.approx(3.0)
    assert rep.s0(0.5) == 3  # m2_trunc(3) = 3 >= 1.25 * 2


def test_binomial_moments_formula():
    for n in (10**2, 10**4, 10**6):
        rep = moments(BinomialFlips(n, 1.7))
        assert rep.m1 == pytest.approx(1.7)
        assert rep.m2 == pytest.approx(1.7**2 * (1 - 1 / n))
        assert rep.m2_over_m1 < 1.7
    # ratio approaches c as n grows
    r_small = moments(BinomialFlips(100, 1.7)).m2_over_m1
    r_big = moments(BinomialFlips(10**6, 1.7)).m2_over_m1
    assert r_small < r_big < 1.7


def test_m2_trunc_nondecreasing_and_converges():
    rep = moments(ZipfFlips(2.5, 500))
    vals = [rep.m2_trunc(s) for s in (1, 2, 5, 20, 100, 500)]
    assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(rep.m2, rel=1e-12)


def test_s0_monotone_in_delta():
    rep = moments(TableFlips([0.0, 0.30, 0.0, 0.35, 0.0, 0.35]))
    deltas = [0.1, 0.3, 0.6, 0.9]
    s0s = [rep.s0(d) for d in deltas]
    assert all(s is not None for s in s0s)
    assert all(a <= b for a, b in zip(s0s, s0s[1:]))


def test_s0_undefined_below_threshold():
    rep = moments(PointMass(1))  # m2 = 0
    assert rep.s0(0.5) is None


def test_zipf_cap_flagging():
    rep = moments(ZipfFlips(2.0, 10**4))
    assert rep.cap_dominated
    assert rep.cap_tail_mass > 0
    rep35 = moments(ZipfFlips(3.5, 10**4))
    assert not rep35.cap_dominated


# -- sampling -----------------------------------------------------------------

def test_pointmass_sampling():
    d = PointMass(3)
    assert all(sample(d, rng(i)) == 3 for i in range(5))


def test_binomial_sample_mean_within_3_sigma():
    d = BinomialFlips(10**4, 1.0)
    xs = d.sample_many(rng(7), 10**6)
    se = math.sqrt(1.0 * (1 - 1e-4) / 10**6)
    assert abs(xs.mean() - 1.0) < 3 * se


def test_zipf_ratio_of_point_masses():
    d = ZipfFlips(2.0, 10**4)
    xs = d.sample_many(rng(11), 10**6)
    c1 = np.count_nonzero(xs == 1)
    c2 = np.count_nonzero(xs == 2)
    assert c1 / c2 == pytest.approx(4.0, rel=0.05)


def test_poisson_cap_resampling():
    d = PoissonFlips(3.0, cap=4)
    xs = d.sample_many(rng(3), 20000)
    assert xs.max() <= 4
    assert xs.min() >= 0


@pytest.mark.parametrize("d,m1,var", [
    (PoissonFlips(2.0), 2.0, 2.0),
    (BinomialFlips(1000, 2.0), 2.0, 2.0 * (1 - 2.0 / 1000)),
    (TableFlips([0.25, 0.25, 0.25, 0.25]), 1.5, 1.25),
])
def test_empirical_mean_within_4_se(d, m1, var):
    xs = d.sample_many(rng(19), 10**6)
    se = math.sqrt(var / xs.size)
    assert abs(xs.mean() - m1) < 4 * se


def test_table_alias_matches_pmf():
    d = TableFlips([0.1, 0.0, 0.6, 0.3])
    xs = d.sample_many(rng(23), 10**6)
    freq = np.bincount(xs, minlength=4) / xs.size
    assert np.allclose(freq, d.probs, atol=0.003)


# -- parsing ------------------------------------------------------------------

def test_parse_round_trips():
    assert parse_dist("point:k=3") == PointMass(3)
    d = parse_dist("poisson:c=2", n=50)
    assert isinstance(d, PoissonFlips) and d.c == 2.0 and d.cap == 50
    d = parse_dist("binomial:c=1.5", n=200)
    assert isinstance(d, BinomialFlips) and (d.n, d.c) == (200, 1.5)
    d = parse_dist("zipf:kappa=1.5", n=100)
    assert isinstance(d, ZipfFlips) and d.kappa == 1.5 and d.cap == 100
    d = parse_dist("table:0:0.2,1:0.3,3:0.5")
    assert isinstance(d, TableFlips)
    assert d.pmf(0) == 0.2 and d.pmf(1) == 0.3 and d.pmf(2) == 0.0 and d.pmf(3) == 0.5


@pytest.mark.parametrize("bad", [
    "gaussian:mu=1",
    "point:k=x",
    "poisson:",
    "binomial:c=1.5",        # no dimension context
    "zipf:kappa=1.5",        # no cap context
    "table:0:0.5,1:0.6",     # sums to 1.1
    "point:k=3,extra=1",
])
def test_parse_rejects_malformed(bad):
    with pytest.raises(ValueError):
        parse_dist(bad)


def test_table_requires_normalisation():
    with pytest.raises(ValueError):
        TableFlips([0.5, 0.6])
    with pytest.raises(ValueError):
        TableFlips([-0.1, 1.1])
