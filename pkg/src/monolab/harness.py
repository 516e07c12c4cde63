"""Experiment orchestration: configs, seeded batches, summaries, presets.

Configs are single JSON documents with unknown keys rejected. Per-run seeds
are independent substreams of the base seed, so parallel and serial
execution produce identical results and any run can be reproduced alone.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algorithms import AlgorithmSpec, ConfigError, OneFifthRule, Trajectory, run
from .flipdist import parse_dist
from .functions import BinVal, LinearFunction, OneMax
from .hottopic import HotTopicFunction, HotTopicParams, build_instance
from .seeds import substream

__all__ = [
    "ExperimentConfig",
    "ExperimentSummary",
    "run_experiment",
    "write_trajectory_csv",
    "footnote_config",
    "run_scaling",
    "aggregate_selection_bias",
    "TRAJECTORY_HEADER",
]

TRAJECTORY_HEADER = "run,evaluations,fitness,ones_fraction,level"

_TOP_KEYS = {"function", "algorithm", "budget", "runs", "base_seed", "sample_every",
             "checkpoints", "engine"}
_FUNC_KEYS = {
    "onemax": {"kind", "n"},
    "binval": {"kind", "n"},
    "linear": {"kind", "n", "weights_seed"},
    "hottopic": {"kind", "n", "alpha", "beta", "eps_level", "num_levels", "instance_seed"},
}
_ALGO_KEYS = {"variant", "mu", "lam", "c", "gamma", "dist", "adaptive"}


@dataclass(frozen=True)
class ExperimentConfig:
    function: dict
    algorithm: dict
    budget: int
    runs: int
    base_seed: int
    sample_every: int
    checkpoints: tuple = ()
    engine: str = "auto"

    def __post_init__(self):
        if self.runs < 1:
            raise ConfigError("runs must be at least 1")
        if self.budget < 1:
            raise ConfigError("budget must be at least 1")
        if self.sample_every < 1:
            raise ConfigError("sample_every must be at least 1")
        kind = self.function.get("kind")
        if kind not in _FUNC_KEYS:
            raise ConfigError(f"unknown function kind {kind!r}")
        unknown = set(self.function) - _FUNC_KEYS[kind]
        if unknown:
            raise ConfigError(f"unknown function keys {sorted(unknown)} for kind {kind!r}")
        unknown = set(self.algorithm) - _ALGO_KEYS
        if unknown:
            raise ConfigError(f"unknown algorithm keys {sorted(unknown)}")
        if "variant" not in self.algorithm:
            raise ConfigError("algorithm config needs a 'variant'")

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        unknown = set(doc) - _TOP_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        missing = {"function", "algorithm", "budget", "runs", "base_seed", "sample_every"} - set(doc)
        if missing:
            raise ConfigError(f"missing config keys {sorted(missing)}")
        return cls(
            function=dict(doc["function"]),
            algorithm=dict(doc["algorithm"]),
            budget=int(doc["budget"]),
            runs=int(doc["runs"]),
            base_seed=int(doc["base_seed"]),
            sample_every=int(doc["sample_every"]),
            checkpoints=tuple(int(c) for c in doc.get("checkpoints", ())),
            engine=str(doc.get("engine", "auto")),
        )

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {
            "function": self.function,
            "algorithm": self.algorithm,
            "budget": self.budget,
            "runs": self.runs,
            "base_seed": self.base_seed,
            "sample_every": self.sample_every,
            "checkpoints": list(self.checkpoints),
            "engine": self.engine,
        }


def build_function(fdict: dict):
    if "kind" not in fdict:
        raise ConfigError("function config needs a 'kind'")
    kind = fdict["kind"]
    if kind not in _FUNC_KEYS:
        raise ConfigError(f"unknown function kind {kind!r}")
    unknown = set(fdict) - _FUNC_KEYS[kind]
    if unknown:
        raise ConfigError(f"unknown function keys {sorted(unknown)} for kind {kind!r}")
    n = int(fdict["n"])
    if kind == "onemax":
        return OneMax(n)
    if kind == "binval":
        return BinVal(n)
    if kind == "linear":
        return LinearFunction.random(n, int(fdict.get("weights_seed", 0)))
    params = HotTopicParams(
        n=n,
        alpha=float(fdict["alpha"]),
        beta=float(fdict["beta"]),
        eps_level=float(fdict["eps_level"]),
        num_levels=int(fdict["num_levels"]),
        master_seed=int(fdict.get("instance_seed", 0)),
    )
    return HotTopicFunction(build_instance(params))


def build_algorithm(adict: dict, n: int) -> AlgorithmSpec:
    unknown = set(adict) - _ALGO_KEYS
    if unknown:
        raise ConfigError(f"unknown algorithm keys {sorted(unknown)}")
    if "variant" not in adict:
        raise ConfigError("algorithm config needs a 'variant'")
    dist = None
    if adict.get("dist") is not None:
        dist = parse_dist(adict["dist"], n=n)
    adaptive = None
    if adict.get("adaptive") is not None:
        a = adict["adaptive"]
        extra = set(a) - {"factor", "lambda_max"}
        if extra:
            raise ConfigError(f"unknown adaptive keys {sorted(extra)}")
        adaptive = OneFifthRule(
            factor=float(a.get("factor", 1.5)),
            lambda_max=float(a["lambda_max"]) if "lambda_max" in a else None,
        )
    return AlgorithmSpec(
        variant=adict["variant"],
        mu=int(adict.get("mu", 1)),
        lam=int(adict.get("lam", 1)),
        c=float(adict.get("c", 1.0)),
        gamma=float(adict["gamma"]) if adict.get("gamma") is not None else None,
        dist=dist,
        adaptive=adaptive,
    )


def run_seed(base_seed: int, run_index: int) -> int:
    """Disjoint deterministic per-run seed."""
    return int(substream(base_seed, run_index).generate_state(1, np.uint64)[0])


def run_experiment(config: ExperimentConfig, threads: int = 1) -> "ExperimentResult":
    f = build_function(config.function)
    spec = build_algorithm(config.algorithm, f.n)
    spec.validate()

    def one(i: int) -> Trajectory:
        return run(spec, f, config.budget, run_seed(config.base_seed, i),
                   config.sample_every, engine=config.engine)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trajectories = list(pool.map(one, range(config.runs)))
    else:
        trajectories = [one(i) for i in range(config.runs)]
    return ExperimentResult(config=config, trajectories=trajectories, function=f)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    trajectories: list
    function: object

    def summary(self) -> "ExperimentSummary":
        return summarize(self.config, self.trajectories, self.function)


def _fitness_repr(v) -> str:
    return str(v.to_int()) if hasattr(v, "to_int") else str(v)


def write_trajectory_csv(result: ExperimentResult, path) -> None:
    """One row per sample per run: run,evaluations,fitness,ones_fraction,level."""
    with open(path, "w") as fh:
        fh.write(TRAJECTORY_HEADER + "\n")
        for i, tr in enumerate(result.trajectories):
            for s in tr.samples:
                fh.write(f"{i},{s.evaluations},{_fitness_repr(s.fitness)},"
                         f"{float(s.ones_fraction)!r},{s.level}\n")


def _state_at(tr: Trajectory, evaluations: int):
    """Last sample at or before the checkpoint (state persists between samples)."""
    prev = None
    for s in tr.samples:
        if s.evaluations <= evaluations:
            prev = s
        else:
            break
    return prev if prev is not None else tr.samples[0]


@dataclass(frozen=True)
class ExperimentSummary:
    config_echo: dict
    checkpoints: list
    max_level_per_run: list
    runs_reaching_max_level: Optional[int]
    mean_runtime: Optional[float]
    runs_reaching_optimum: int

    def to_json_dict(self) -> dict:
        return {
            "config_echo": self.config_echo,
            "checkpoints": self.checkpoints,
            "max_level_per_run": self.max_level_per_run,
            "runs_reaching_max_level": self.runs_reaching_max_level,
            "mean_runtime": self.mean_runtime,
            "runs_reaching_optimum": self.runs_reaching_optimum,
        }

    def write(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)


def summarize(config: ExperimentConfig, trajectories: list, function) -> ExperimentSummary:
    is_ht = config.function.get("kind") == "hottopic"
    check_evals = list(config.checkpoints) if config.checkpoints else [config.budget]
    checkpoints = []
    for e in check_evals:
        vals = np.array([_state_at(tr, e).ones_fraction for tr in trajectories])
        checkpoints.append({
            "evaluations": e,
            "ones_mean": float(vals.mean()),
            "ones_std": float(vals.std(ddof=1)) if vals.size > 1 else 0.0,
        })
    max_levels = [max(s.level for s in tr.samples) for tr in trajectories]
    reached = None
    if is_ht:
        top = config.function["num_levels"]
        reached = sum(1 for m in max_levels if m >= top)
    runtimes = [tr.total_evaluations for tr in trajectories if tr.terminated == "optimum"]
    echo = config.to_dict()
    echo["tie_policy"] = "accept_equal_for_population_one; uniform_argmin_removal_for_mu_plus_one"
    if is_ht:
        params = build_function(config.function).instance.params
        echo["zero_threshold"] = params.zero_threshold
    return ExperimentSummary(
        config_echo=echo,
        checkpoints=checkpoints,
        max_level_per_run=max_levels,
        runs_reaching_max_level=reached,
        mean_runtime=float(np.mean(runtimes)) if runtimes else None,
        runs_reaching_optimum=len(runtimes),
    )


def aggregate_selection_bias(trajectories: list) -> tuple[float, float]:
    """Pooled selection-bias estimate over several runs."""
    events = sum(tr.instr_events for tr in trajectories)
    if events == 0:
        from .algorithms import UndefinedEstimateError

        raise UndefinedEstimateError("no conditioning events across runs")
    tot = sum(tr.instr_sum_s10 for tr in trajectories)
    tot_sq = sum(tr.instr_sum_s10_sq for tr in trajectories)
    mean = tot / events
    if events == 1:
        return mean, float("inf")
    var = max(0.0, (tot_sq - events * mean * mean) / (events - 1))
    return mean, math.sqrt(var / events)


# -- presets -------------------------------------------------------------------


def footnote_config(c: float, runs: int = 20, budget: int = 500_000,
                    base_seed: int = 90210, instance_seed: int = 7) -> ExperimentConfig:
    """The reference dichotomy experiment: (1+1)-EA on the hard instance family
    with n = 10^4, alpha = 0.25, beta = 0.05, eps = 0.05 and 100 levels,
    checkpointed at 10^5, 2*10^5 and 5*10^5 evaluations."""
    return ExperimentConfig(
        function={"kind": "hottopic", "n": 10_000, "alpha": 0.25, "beta": 0.05,
                  "eps_level": 0.05, "num_levels": 100, "instance_seed": instance_seed},
        algorithm={"variant": "one_plus_lambda_ea", "lam": 1, "c": c},
        budget=budget,
        runs=runs,
        base_seed=base_seed,
        sample_every=10_000,
        checkpoints=(100_000, 200_000, 500_000),
    )


def run_scaling(template: dict, n_list, threads: int = 1,
                budget_factor_nlogn: Optional[float] = None) -> list[dict]:
    """Sweep the dimension; per-n mean runtime and the runtime/(n ln n) ratio.

    The per-n budget is `budget_factor_nlogn * n * ln(n)` when given, else the
    template's fixed budget. Emits a partial-results warning entry when fewer
    than 90% of a dimension's runs terminate.
    """
    rows = []
    for n in n_list:
        doc = json.loads(json.dumps(template))  # deep copy
        doc["function"]["n"] = int(n)
        if budget_factor_nlogn is not None:
            doc["budget"] = int(budget_factor_nlogn * n * math.log(n))
        cfg = ExperimentConfig.from_dict(doc)
        res = run_experiment(cfg, threads=threads)
        runtimes = [t.total_evaluations for t in res.trajectories if t.terminated == "optimum"]
        frac = len(runtimes) / cfg.runs
        mean_rt = float(np.mean(runtimes)) if runtimes else float("nan")
        rows.append({
            "n": int(n),
            "mean_runtime": mean_rt,
            "ratio": mean_rt / (n * math.log(n)),
            "terminated_fraction": frac,
            "warning": "partial results: <90% of runs terminated" if frac < 0.9 else "",
        })
    return rows
