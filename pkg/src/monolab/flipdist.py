"""Flip-count distributions for mutation operators.

Each distribution describes the number s of bits flipped in one mutation.
Besides sampling, the module computes the first and second falling moments
m1 = E[s] and m2 = E[s(s-1)], truncated second moments, and the threshold
index s0 used by the hardness criteria.

Heavy-tailed sampling (Zipf, Table) uses Vose's alias method; tables are
precomputed once and the distributions are immutable afterwards.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import special, stats

__all__ = [
    "FlipCountDistribution",
    "BinomialFlips",
    "PoissonFlips",
    "ZipfFlips",
    "PointMass",
    "TableFlips",
    "MomentReport",
    "parse_dist",
    "sample",
    "moments",
    "pmf",
]

_PROB_TOL = 1e-12


def _alias_setup(probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vose alias tables (J, q) for a normalised probability vector."""
    k = probs.size
    q = probs * k
    j = np.zeros(k, dtype=np.int64)
    smaller = [i for i in range(k) if q[i] < 1.0]
    larger = [i for i in range(k) if q[i] >= 1.0]
    while smaller and larger:
        small = smaller.pop()
        large = larger.pop()
        j[small] = large
        q[large] -= 1.0 - q[small]
        if q[large] < 1.0:
            smaller.append(large)
        else:
            larger.append(large)
    return j, q


def _alias_draw(j: np.ndarray, q: np.ndarray, rng: np.random.Generator, size: int) -> np.ndarray:
    idx = rng.integers(0, j.size, size=size)
    keep = rng.random(size) < q[idx]
    return np.where(keep, idx, j[idx])


class FlipCountDistribution:
    """Common interface; concrete variants below."""

    def pmf(self, k: int) -> float:
        raise NotImplementedError

    def pmf_block(self, lo: int, hi: int) -> np.ndarray:
        """Point probabilities for k in [lo, hi)."""
        raise NotImplementedError

    @property
    def support_max(self) -> Optional[int]:
        """Largest k with positive probability, or None if unbounded."""
        raise NotImplementedError

    def pmf_sup_tail(self, m: int) -> float:
        """Upper bound on sup_{k > m} pmf(k)."""
        raise NotImplementedError

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator) -> int:
        return int(self.sample_many(rng, 1)[0])

    def exact_moments(self) -> Optional[tuple[float, float]]:
        """(m1, m2) in closed form, or None to fall back to summation."""
        return None

    def spec_string(self) -> str:
        raise NotImplementedError

    # -- falling moments ----------------------------------------------------

    def _summed_moments(self) -> tuple[float, float]:
        hi = self.support_max
        if hi is None:
            # unbounded support: sum until the remaining mass cannot move
            # either moment by more than the tolerance
            h, tail = 2, 1.0
            total1 = total2 = acc = 0.0
            lo = 0
            while tail * h * h > _PROB_TOL and h < 10**9:
                ks = np.arange(lo, h, dtype=np.float64)
                ps = self.pmf_block(lo, h)
                total1 += float(np.dot(ps, ks))
                total2 += float(np.dot(ps, ks * (ks - 1)))
                acc += float(ps.sum())
                tail = max(0.0, 1.0 - acc)
                lo, h = h, h * 2
            return total1, total2
        ks = np.arange(0, hi + 1, dtype=np.float64)
        ps = self.pmf_block(0, hi + 1)
        return float(np.dot(ps, ks)), float(np.dot(ps, ks * (ks - 1)))

    def moments(self) -> "MomentReport":
        exact = self.exact_moments()
        m1, m2 = exact if exact is not None else self._summed_moments()
        return MomentReport(
            m1=m1,
            m2=m2,
            p0=self.pmf(0),
            p1=self.pmf(1),
            cap_dominated=getattr(self, "cap_dominated", False),
            cap_tail_mass=getattr(self, "cap_tail_mass", None),
            dist=self,
        )


@dataclass(frozen=True)
class BinomialFlips(FlipCountDistribution):
    """Binomial(n, c/n): the flip count of standard bit mutation."""

    n: int
    c: float

    def __post_init__(self):
        if self.n < 1 or not 0 < self.c <= self.n:
            raise ValueError(f"need 0 < c <= n, got c={self.c}, n={self.n}")

    @property
    def p(self) -> float:
        return self.c / self.n

    def pmf(self, k: int) -> float:
        if not 0 <= k <= self.n:
            return 0.0
        return float(stats.binom.pmf(k, self.n, self.p))

    def pmf_block(self, lo: int, hi: int) -> np.ndarray:
        return stats.binom.pmf(np.arange(lo, hi), self.n, self.p)

    @property
    def support_max(self) -> Optional[int]:
        return self.n

    def pmf_sup_tail(self, m: int) -> float:
        if m >= self.n:
            return 0.0
        mode = math.floor((self.n + 1) * self.p)
        return self.pmf(m + 1) if m + 1 >= mode else 1.0

    def sample_many(self, rng, size):
        return rng.binomial(self.n, self.p, size=size)

    def exact_moments(self):
        return self.c, self.c * self.c * (1.0 - 1.0 / self.n)

    def spec_string(self) -> str:
        return f"binomial:c={self.c},n={self.n}"


@dataclass(frozen=True)
class PoissonFlips(FlipCountDistribution):
    """Poisson(c); sampling resamples any draw above the optional cap.

    The cap is a physical guard (at most n bits can flip); its probability
    mass is astronomically small for constant c, so pmf and moments use the
    plain Poisson law.
    """

    c: float
    cap: Optional[int] = None

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("c must be positive")

    def pmf(self, k: int) -> float:
        if k < 0:
            return 0.0
        return float(stats.poisson.pmf(k, self.c))

    def pmf_block(self, lo, hi):
        return stats.poisson.pmf(np.arange(lo, hi), self.c)

    @property
    def support_max(self) -> Optional[int]:
        return None

    def pmf_sup_tail(self, m: int) -> float:
        return self.pmf(m + 1) if m + 1 >= self.c else 1.0

    def sample_many(self, rng, size):
        out = rng.poisson(self.c, size=size)
        if self.cap is not None:
            bad = out > self.cap
            while np.any(bad):
                out[bad] = rng.poisson(self.c, size=int(bad.sum()))
                bad = out > self.cap
        return out

    def exact_moments(self):
        return self.c, self.c * self.c

    def spec_string(self) -> str:
        return f"poisson:c={self.c}"


class ZipfFlips(FlipCountDistribution):
    """Power law Pr[s=k] = k^-kappa / Z on the finite support [1, cap].

    Z sums k^-kappa over the support instead of the zeta function, since at
    most cap = n bits can flip; `cap_tail_mass` reports the mass the infinite
    law would place beyond the cap. For kappa <= 3 the second falling moment
    of the infinite law diverges, so m2 here is an artefact of the cap and is
    flagged `cap_dominated`.
    """

    def __init__(self, kappa: float, cap: int):
        if kappa <= 1.0:
            raise ValueError("kappa must exceed 1")
        if cap < 1:
            raise ValueError("cap must be at least 1")
        self.kappa = kappa
        self.cap = cap
        self._pmf = None

    def _table(self) -> np.ndarray:
        if self._pmf is None:
            raw = np.arange(1, self.cap + 1, dtype=np.float64) ** (-self.kappa)
            self._pmf = raw / raw.sum()
        return self._pmf

    @property
    def cap_dominated(self) -> bool:
        return self.kappa <= 3.0

    @property
    def cap_tail_mass(self) -> float:
        zeta = float(special.zeta(self.kappa, 1))
        covered = float((np.arange(1, self.cap + 1, dtype=np.float64) ** (-self.kappa)).sum())
        return max(0.0, 1.0 - covered / zeta)

    def pmf(self, k: int) -> float:
        if not 1 <= k <= self.cap:
            return 0.0
        return float(self._table()[k - 1])

    def pmf_block(self, lo, hi):
        t = self._table()
        ks = np.arange(lo, hi)
        out = np.zeros(ks.size)
        valid = (ks >= 1) & (ks <= self.cap)
        out[valid] = t[ks[valid] - 1]
        return out

    @property
    def support_max(self) -> Optional[int]:
        return self.cap

    def pmf_sup_tail(self, m: int) -> float:
        return self.pmf(m + 1) if m < self.cap else 0.0

    @functools.cached_property
    def _alias(self):
        return _alias_setup(self._table())

    def sample_many(self, rng, size):
        j, q = self._alias
        return _alias_draw(j, q, rng, size) + 1

    def spec_string(self) -> str:
        return f"zipf:kappa={self.kappa},cap={self.cap}"


@dataclass(frozen=True)
class PointMass(FlipCountDistribution):
    """Always flips exactly k bits; k = 1 is random local search."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be nonnegative")

    def pmf(self, k: int) -> float:
        return 1.0 if k == self.k else 0.0

    def pmf_block(self, lo, hi):
        out = np.zeros(hi - lo)
        if lo <= self.k < hi:
            out[self.k - lo] = 1.0
        return out

    @property
    def support_max(self) -> Optional[int]:
        return self.k

    def pmf_sup_tail(self, m: int) -> float:
        return 1.0 if m < self.k else 0.0

    def sample_many(self, rng, size):
        return np.full(size, self.k, dtype=np.int64)

    def exact_moments(self):
        return float(self.k), float(self.k * (self.k - 1))

    def spec_string(self) -> str:
        return f"point:k={self.k}"


class TableFlips(FlipCountDistribution):
    """Explicit finite table p_0..p_max; must sum to one."""

    def __init__(self, probs):
        p = np.asarray(probs, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probability table must be a 1-d sequence")
        if np.any(p < 0):
            raise ValueError("probabilities must be nonnegative")
        if abs(p.sum() - 1.0) > _PROB_TOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        self.probs = p

    def pmf(self, k: int) -> float:
        if not 0 <= k < self.probs.size:
            return 0.0
        return float(self.probs[k])

    def pmf_block(self, lo, hi):
        out = np.zeros(hi - lo)
        a = max(lo, 0)
        b = min(hi, self.probs.size)
        if a < b:
            out[a - lo : b - lo] = self.probs[a:b]
        return out

    @property
    def support_max(self) -> Optional[int]:
        return int(np.nonzero(self.probs)[0][-1]) if np.any(self.probs) else 0

    @functools.cached_property
    def _suffix_max(self) -> np.ndarray:
        return np.maximum.accumulate(self.probs[::-1])[::-1]

    def pmf_sup_tail(self, m: int) -> float:
        if m + 1 >= self.probs.size:
            return 0.0
        return float(self._suffix_max[max(m + 1, 0)])

    @functools.cached_property
    def _alias(self):
        return _alias_setup(self.probs)

    def sample_many(self, rng, size):
        j, q = self._alias
        return _alias_draw(j, q, rng, size)

    def spec_string(self) -> str:
        items = ",".join(f"{k}:{p:g}" for k, p in enumerate(self.probs) if p > 0)
        return f"table:{items}"


# -- spec-op aliases ---------------------------------------------------------


def sample(dist: FlipCountDistribution, rng: np.random.Generator) -> int:
    return dist.sample(rng)


def moments(dist: FlipCountDistribution) -> "MomentReport":
    return dist.moments()


def pmf(dist: FlipCountDistribution, k: int) -> float:
    return dist.pmf(k)


@dataclass(frozen=True)
class MomentReport:
    """Falling moments plus the point probabilities the criteria care about."""

    m1: float
    m2: float
    p0: float
    p1: float
    cap_dominated: bool = False
    cap_tail_mass: Optional[float] = None
    dist: Optional[FlipCountDistribution] = field(default=None, repr=False, compare=False)

    @property
    def m2_over_m1(self) -> float:
        return self.m2 / self.m1

    def m2_trunc(self, sigma: int) -> float:
        """Truncated second falling moment sum_{i<=sigma} p_i i(i-1)."""
        ks = np.arange(0, sigma + 1, dtype=np.float64)
        ps = self.dist.pmf_block(0, sigma + 1)
        return float(np.dot(ps, ks * (ks - 1)))

    def s0(self, delta: float) -> Optional[int]:
        """Smallest sigma with m2_trunc(sigma) >= (1 + delta/2) * m1.

        Only defined when m2/m1 >= 1 + delta; returns None otherwise.
        """
        if delta <= 0:
            raise ValueError("delta must be positive")
        if self.m2 < (1.0 + delta) * self.m1:
            return None
        target = (1.0 + delta / 2.0) * self.m1
        hi = self.dist.support_max
        acc = 0.0
        sigma = 1
        while True:
            blk_hi = sigma + 1024
            ks = np.arange(sigma, blk_hi, dtype=np.float64)
            ps = self.dist.pmf_block(sigma, blk_hi)
            contrib = ps * ks * (ks - 1)
            cum = acc + np.cumsum(contrib)
            hit = np.nonzero(cum >= target)[0]
            if hit.size:
                return sigma + int(hit[0])
            acc = float(cum[-1])
            sigma = blk_hi
            if hi is not None and sigma > hi + 1:
                return None  # unreachable when m2 >= target, guards fp edge


# -- config-string parsing ---------------------------------------------------


def parse_dist(spec: str, n: Optional[int] = None) -> FlipCountDistribution:
    """Parse "binomial:c=1.5", "poisson:c=2", "zipf:kappa=1.5", "point:k=3",
    "table:0:0.2,1:0.3,3:0.5". Zipf and binomial take their support size from
    the optional context dimension n unless given explicitly (n=... / cap=...).
    """
    head, _, rest = spec.strip().partition(":")
    head = head.lower()
    try:
        if head == "point":
            kv = _parse_kv(rest)
            out = PointMass(int(kv.pop("k")))
            _reject_leftover(kv, spec)
            return out
        if head == "poisson":
            kv = _parse_kv(rest)
            cap = int(kv.pop("cap")) if "cap" in kv else n
            out = PoissonFlips(float(kv.pop("c")), cap=cap)
            _reject_leftover(kv, spec)
            return out
        if head == "binomial":
            kv = _parse_kv(rest)
            nn = int(kv.pop("n")) if "n" in kv else n
            if nn is None:
                raise ValueError("binomial needs n (pass n=... or a context dimension)")
            out = BinomialFlips(nn, float(kv.pop("c")))
            _reject_leftover(kv, spec)
            return out
        if head == "zipf":
            kv = _parse_kv(rest)
            cap = None
            for key in ("cap", "m"):
                if key in kv:
                    cap = int(float(kv.pop(key)))
            if cap is None:
                cap = n
            if cap is None:
                raise ValueError("zipf needs a support cap (pass cap=... or a context dimension)")
            out = ZipfFlips(float(kv.pop("kappa")), cap)
            _reject_leftover(kv, spec)
            return out
        if head == "table":
            entries = {}
            for item in rest.split(","):
                k, _, v = item.partition(":")
                entries[int(k)] = float(v)
            probs = np.zeros(max(entries) + 1)
            for k, v in entries.items():
                probs[k] = v
            return TableFlips(probs)
    except (KeyError, ValueError, TypeError) as exc:
        raise ValueError(f"malformed distribution spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown distribution kind {head!r} in {spec!r}")


def _reject_leftover(kv: dict, spec: str) -> None:
    if kv:
        raise ValueError(f"unknown keys {sorted(kv)} in distribution spec {spec!r}")


def _parse_kv(rest: str) -> dict:
    out = {}
    for item in rest.split(","):
        if not item:
            continue
        k, _, v = item.partition("=")
        if not _:
            raise ValueError(f"expected key=value, got {item!r}")
        out[k.strip().lower()] = v.strip()
    return out
