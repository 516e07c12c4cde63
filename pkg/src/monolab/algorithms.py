"""Elitist evolutionary and genetic algorithm variants behind one run interface.

Variant semantics, shared by both execution engines:

* ``rls`` flips exactly one uniform bit per round; the offspring replaces the
  parent iff its fitness is at least the parent's.
* ``one_plus_lambda_ea`` creates lambda offspring by standard bit mutation
  (each bit independently with probability c/n), picks the fittest (ties
  random) and applies the same accept-on-equal rule.
* ``mu_plus_one_ea`` / ``mu_plus_one_ga`` keep a multiset of mu points. Each
  generation creates one offspring; the GA first flips a fair coin between
  mutation (uniform parent) and uniform crossover (two independent uniform
  parents, each bit from either with probability 1/2). Selection adds the
  offspring and removes one uniformly chosen worst individual.
* ``*_fast_*`` variants replace standard bit mutation by drawing a flip count
  s from a distribution and flipping exactly s uniform distinct positions;
  s = 0 reproduces the parent.
* ``one_lambda_lambda_ga`` draws s ~ Bin(n, c/n) once per generation, builds
  lambda mutants flipping exactly s positions, selects the fittest y, then
  performs lambda biased crossovers keeping each of y's flips with
  probability gamma; the fittest crossover replaces the parent iff its
  fitness is at least the parent's. Each generation costs 2*lambda
  evaluations. The optional one-fifth rule shrinks lambda by F on
  improvement and grows it by F^(1/4) otherwise, with c = lambda and
  gamma = 1/lambda (extra defaults F = 1.5, lambda_max = n, exposed in the
  spec object).

Runs are deterministic given (spec, fitness instance, seed). Instrumentation
counts, per generation, the offspring that competes with the parent: when it
flips at least one zero-bit (s01 > 0) the number of lost one-bits (s10) is
accumulated, which estimates the selection bias E[s10 | s01 > 0].
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bitvec import BitVector, flip_bits
from .flipdist import FlipCountDistribution
from .hottopic import HotTopicFunction, LevelState, eval_ht_incremental

__all__ = [
    "VARIANTS",
    "ConfigError",
    "UndefinedEstimateError",
    "OneFifthRule",
    "AlgorithmSpec",
    "TrajectorySample",
    "Trajectory",
    "run",
    "acceptance_rule",
    "selection_bias_estimate",
]

VARIANTS = (
    "rls",
    "one_plus_lambda_ea",
    "mu_plus_one_ea",
    "mu_plus_one_ga",
    "one_plus_lambda_fast_ea",
    "mu_plus_one_fast_ea",
    "mu_plus_one_fast_ga",
    "one_lambda_lambda_ga",
)

_FAST_VARIANTS = {"one_plus_lambda_fast_ea", "mu_plus_one_fast_ea", "mu_plus_one_fast_ga"}
_MU_VARIANTS = {"mu_plus_one_ea", "mu_plus_one_ga", "mu_plus_one_fast_ea", "mu_plus_one_fast_ga"}


class ConfigError(ValueError):
    """Invalid algorithm or experiment configuration; raised before any evaluation."""


class UndefinedEstimateError(RuntimeError):
    """Selection-bias estimate requested but no conditioning event occurred."""


@dataclass(frozen=True)
class OneFifthRule:
    """Self-adjustment of lambda for the two-phase GA."""

    factor: float = 1.5
    lambda_max: Optional[float] = None  # defaults to n at run time

    def __post_init__(self):
        if self.factor <= 1.0:
            raise ConfigError("one-fifth rule factor must exceed 1")


@dataclass(frozen=True)
class AlgorithmSpec:
    variant: str
    mu: int = 1
    lam: int = 1
    c: float = 1.0
    gamma: Optional[float] = None
    dist: Optional[FlipCountDistribution] = None
    adaptive: Optional[OneFifthRule] = None

    def validate(self) -> None:
        v = self.variant
        if v not in VARIANTS:
            raise ConfigError(f"unknown variant {v!r}; expected one of {VARIANTS}")
        if self.mu < 1 or self.lam < 1:
            raise ConfigError("mu and lambda must be at least 1")
        if v in _MU_VARIANTS:
            if self.lam != 1:
                raise ConfigError(f"{v} uses exactly one offspring per generation")
        elif self.mu != 1:
            raise ConfigError(f"{v} uses population size one")
        if v == "rls" and self.lam != 1:
            raise ConfigError("rls creates one offspring per round")
        if v in _FAST_VARIANTS:
            if self.dist is None:
                raise ConfigError(f"{v} needs a flip-count distribution")
        elif self.dist is not None:
            raise ConfigError(f"{v} does not take a flip-count distribution")
        if v == "one_lambda_lambda_ga":
            if self.gamma is None or not 0.0 < self.gamma <= 1.0:
                raise ConfigError("one_lambda_lambda_ga needs gamma in (0,1]")
        else:
            if self.gamma is not None:
                raise ConfigError("gamma only applies to one_lambda_lambda_ga")
            if self.adaptive is not None:
                raise ConfigError("the one-fifth rule only applies to one_lambda_lambda_ga")
        if v in ("one_plus_lambda_ea", "mu_plus_one_ea", "mu_plus_one_ga", "one_lambda_lambda_ga"):
            if not self.c > 0:
                raise ConfigError("mutation parameter c must be positive")
        if v in ("mu_plus_one_fast_ea", "mu_plus_one_fast_ga") and self.dist.pmf(0) <= 0.0:
            warnings.warn(
                f"{v} with Pr[s=0] = 0: population may fail to consolidate; "
                "the efficiency guarantees assume a positive idle probability",
                stacklevel=2,
            )


@dataclass(frozen=True)
class TrajectorySample:
    evaluations: int
    fitness: object  # int for OneMax/linear/hard instances; order token for BinVal
    ones_fraction: float
    level: int


@dataclass
class Trajectory:
    samples: list
    terminated: str  # "optimum" | "budget"
    total_evaluations: int
    instr_events: int = 0
    instr_sum_s10: int = 0
    instr_sum_s01: int = 0
    instr_sum_s10_sq: int = 0

    @property
    def final(self) -> TrajectorySample:
        return self.samples[-1]


def acceptance_rule(parent_fitness, offspring_fitness) -> bool:
    """Single-parent elitist acceptance: keep the offspring iff it is at least as fit."""
    return offspring_fitness >= parent_fitness


def selection_bias_estimate(trajectory: Trajectory) -> tuple[float, float]:
    """(mean of s10 over winner-offspring events with s01 > 0, standard error)."""
    k = trajectory.instr_events
    if k == 0:
        raise UndefinedEstimateError("no winner offspring ever flipped a zero-bit")
    mean = trajectory.instr_sum_s10 / k
    if k == 1:
        return mean, float("inf")
    var = max(0.0, (trajectory.instr_sum_s10_sq - k * mean * mean) / (k - 1))
    return mean, math.sqrt(var / k)


# -- run dispatch -------------------------------------------------------------


def run(
    spec: AlgorithmSpec,
    f,
    budget: int,
    seed: int,
    sample_every: int = 1000,
    engine: str = "auto",
) -> Trajectory:
    """Execute one run of the selected variant against a fitness oracle.

    ``f`` provides ``n``, ``evaluate(BitVector)``, ``is_optimal(BitVector)``
    and, for hard instances, ``level_of``. The run stops at the first
    evaluation of the optimum or when the next generation would exceed the
    evaluation budget. A trajectory sample is recorded after initialisation,
    whenever the evaluation count crosses a multiple of ``sample_every``, and
    at termination.
    """
    spec.validate()
    if f.n < 2:
        raise ConfigError("dimension must be at least 2")
    if budget < spec.mu:
        raise ConfigError("budget must cover initialisation")
    if sample_every < 1:
        raise ConfigError("sample_every must be positive")
    if engine not in ("auto", "python", "numba"):
        raise ConfigError(f"unknown engine {engine!r}")
    if spec.dist is not None and float(spec.dist.pmf_block(0, f.n + 1).sum()) <= 0.0:
        raise ConfigError("flip distribution places no mass on {0..n}")
    if engine == "auto":
        engine = "numba" if getattr(f, "kind", None) in ("onemax", "linear", "hottopic") else "python"
    if engine == "numba":
        from ._fast import run_fast

        return run_fast(spec, f, budget, seed, sample_every)
    return _run_python(spec, f, budget, seed, sample_every)


# -- pure-python engine (reference semantics; also handles BinVal et al.) ----


class _Member:
    __slots__ = ("x", "fit", "state")

    def __init__(self, x, fit, state):
        self.x = x
        self.fit = fit
        self.state = state


class _Recorder:
    def __init__(self, sample_every: int, n: int, is_ht: bool):
        self.every = sample_every
        self.n = n
        self.is_ht = is_ht
        self.samples: list[TrajectorySample] = []
        self.next_at = sample_every

    def record(self, evals: int, member: _Member, force: bool = False) -> None:
        if not force and evals < self.next_at:
            return
        if self.samples and self.samples[-1].evaluations >= evals:
            return
        lvl = member.state.level if (self.is_ht and member.state is not None) else 0
        self.samples.append(
            TrajectorySample(evals, member.fit, member.x.ones_count / self.n, lvl)
        )
        while self.next_at <= evals:
            self.next_at += self.every


def _distinct_positions(rng: np.random.Generator, n: int, s: int) -> list[int]:
    if s == 0:
        return []
    if s > n:
        raise ValueError("cannot flip more positions than bits")
    if 3 * s * s <= n:
        while True:
            pos = rng.integers(0, n, size=s)
            if len(set(pos.tolist())) == s:
                return pos.tolist()
    return rng.choice(n, size=s, replace=False).tolist()


def _run_python(spec: AlgorithmSpec, f, budget: int, seed: int, sample_every: int) -> Trajectory:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    n = f.n
    is_ht = isinstance(f, HotTopicFunction)
    rec = _Recorder(sample_every, n, is_ht)
    instr = [0, 0, 0, 0]  # events, sum_s10, sum_s01, sum_s10_sq

    def make_member(x: BitVector) -> _Member:
        if is_ht:
            state = LevelState.from_point(f.instance, x)
            fit = _ht_value_from_state(f, state)
            return _Member(x, fit, state)
        return _Member(x, f.evaluate(x), None)

    def offspring_from_flips(parent: _Member, flips: list[int]) -> _Member:
        if is_ht:
            val, state = eval_ht_incremental(f.instance, parent.state, flips)
            return _Member(state.point, val, state)
        x = flip_bits(parent.x, flips)
        return _Member(x, f.evaluate(x), None)

    def note_winner(parent: _Member, flips: list[int]) -> None:
        s01 = sum(1 for p in flips if not parent.x.bit(p))
        if s01 > 0:
            s10 = len(flips) - s01
            instr[0] += 1
            instr[1] += s10
            instr[2] += s01
            instr[3] += s10 * s10

    # initialisation
    pop: list[_Member] = []
    evals = 0
    found = None
    for _ in range(spec.mu):
        m = make_member(BitVector.random(n, rng))
        evals += 1
        if f.is_optimal(m.x):
            found = m
        pop.append(m)
        if found:
            break
    best = max(pop, key=lambda m: m.fit)
    rec.record(evals, best, force=True)

    def draw_flip_count() -> int:
        if spec.variant == "rls":
            return 1
        if spec.dist is not None:
            s = spec.dist.sample(rng)
            while s > n:
                s = spec.dist.sample(rng)
            return s
        return int(rng.binomial(n, spec.c / n))

    lam_f = float(spec.lam)
    gamma = spec.gamma
    c = spec.c
    lam_max = float(n)
    if spec.adaptive is not None:
        if spec.adaptive.lambda_max is not None:
            lam_max = spec.adaptive.lambda_max
        c = lam_f
        gamma = 1.0 / lam_f

    two_phase = spec.variant == "one_lambda_lambda_ga"
    is_mu = spec.variant in _MU_VARIANTS
    is_ga = spec.variant in ("mu_plus_one_ga", "mu_plus_one_fast_ga")

    while found is None:
        lam_int = max(1, int(round(lam_f))) if two_phase else spec.lam
        per_gen = 2 * lam_int if two_phase else spec.lam
        if evals + per_gen > budget:
            break

        if two_phase:
            parent = pop[0]
            s = int(rng.binomial(n, c / n))
            # mutation phase: fittest of lam mutants, ties random
            besty = None
            besty_flips: list[int] = []
            ties = 0
            for _ in range(lam_int):
                flips = _distinct_positions(rng, n, s)
                y = offspring_from_flips(parent, flips)
                evals += 1
                if f.is_optimal(y.x):
                    found = y
                    break
                if besty is None or y.fit > besty.fit:
                    besty, besty_flips, ties = y, flips, 1
                elif y.fit == besty.fit:
                    ties += 1
                    if rng.random() < 1.0 / ties:
                        besty, besty_flips = y, flips
            if found:
                break
            # crossover phase: keep each of y's flips with probability gamma
            bestz = None
            bestz_flips: list[int] = []
            ties = 0
            for _ in range(lam_int):
                kept = [p for p in besty_flips if rng.random() < gamma]
                z = offspring_from_flips(parent, kept)
                evals += 1
                if f.is_optimal(z.x):
                    found = z
                    break
                if bestz is None or z.fit > bestz.fit:
                    bestz, bestz_flips, ties = z, kept, 1
                elif z.fit == bestz.fit:
                    ties += 1
                    if rng.random() < 1.0 / ties:
                        bestz, bestz_flips = z, kept
            if found:
                break
            note_winner(parent, bestz_flips)
            improved = bestz.fit > parent.fit
            if acceptance_rule(parent.fit, bestz.fit):
                pop[0] = bestz
            if spec.adaptive is not None:
                fac = spec.adaptive.factor
                lam_f = max(1.0, lam_f / fac) if improved else min(lam_max, lam_f * fac**0.25)
                c = lam_f
                gamma = 1.0 / lam_f
            rec.record(evals, pop[0])

        elif is_mu:
            crossover = is_ga and rng.random() < 0.5
            if crossover:
                a, b = pop[int(rng.integers(0, spec.mu))], pop[int(rng.integers(0, spec.mu))]
                mask = rng.random(n) < 0.5
                bits = np.where(mask, a.x.to_array(), b.x.to_array())
                child = make_member(BitVector.from_bits(bits))
            else:
                parent = pop[int(rng.integers(0, spec.mu))]
                flips = _distinct_positions(rng, n, draw_flip_count())
                child = offspring_from_flips(parent, flips)
                note_winner(parent, flips)
            evals += 1
            if f.is_optimal(child.x):
                found = child
                break
            # remove a uniformly random worst individual among mu + 1
            pop.append(child)
            worst = min(m.fit for m in pop)
            victims = [i for i, m in enumerate(pop) if m.fit == worst]
            pop.pop(victims[int(rng.integers(0, len(victims)))])
            rec.record(evals, max(pop, key=lambda m: m.fit))

        else:  # rls / one_plus_lambda_ea / one_plus_lambda_fast_ea
            parent = pop[0]
            bestm = None
            best_flips: list[int] = []
            ties = 0
            for _ in range(spec.lam):
                flips = _distinct_positions(rng, n, draw_flip_count())
                y = offspring_from_flips(parent, flips)
                evals += 1
                if f.is_optimal(y.x):
                    found = y
                    break
                if bestm is None or y.fit > bestm.fit:
                    bestm, best_flips, ties = y, flips, 1
                elif y.fit == bestm.fit:
                    ties += 1
                    if rng.random() < 1.0 / ties:
                        bestm, best_flips = y, flips
            if found:
                break
            note_winner(parent, best_flips)
            if acceptance_rule(parent.fit, bestm.fit):
                pop[0] = bestm
            rec.record(evals, pop[0])

    if found is not None:
        rec.record(evals, found, force=True)
        terminated = "optimum"
    else:
        rec.record(evals, max(pop, key=lambda m: m.fit), force=True)
        terminated = "budget"
    return Trajectory(
        samples=rec.samples,
        terminated=terminated,
        total_evaluations=evals,
        instr_events=instr[0],
        instr_sum_s10=instr[1],
        instr_sum_s01=instr[2],
        instr_sum_s10_sq=instr[3],
    )


def _ht_value_from_state(f: HotTopicFunction, state: LevelState) -> int:
    from .hottopic import _ones_in_a, _value

    ones_a = _ones_in_a(f.instance, state.point, state.level)
    return _value(f.instance, state.level, ones_a, state.point.ones_count)
