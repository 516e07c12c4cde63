"""Command-line interface: predict | constants | run | footnote | scaling.

Exit codes: 0 ok, 2 configuration/usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algorithms import ConfigError
from .dichotomy import classify, critical_constants, default_alpha_grid
from .flipdist import parse_dist
from .harness import (
    ExperimentConfig,
    footnote_config,
    run_experiment,
    run_scaling,
    write_trajectory_csv,
)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monolab",
                                description="Evolutionary algorithms on monotone functions: "
                                            "hard-instance simulator and dichotomy predictor.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="print the critical constants alpha0 and c0")

    q = sub.add_parser("predict", help="classify a flip-count distribution")
    q.add_argument("dist", help='e.g. "poisson:c=4", "zipf:kappa=1.5", "point:k=1", '
                                '"table:0:0.2,1:0.3,3:0.5"')
    q.add_argument("--cap", type=int, default=10**6,
                   help="support cap for zipf/binomial specs without one (default 1e6)")
    q.add_argument("--grid-points", type=int, default=400)
    q.add_argument("--margin", type=float, default=1e-3)
    q.add_argument("--csv", type=Path, default=None, help="write the alpha,phi curve here")
    q.add_argument("--format", choices=["text", "json"], default="text")

    r = sub.add_parser("run", help="run an experiment batch from a JSON config")
    r.add_argument("--config", type=Path, required=True)
    r.add_argument("--out", type=Path, default=None, help="output directory")
    r.add_argument("--threads", type=int, default=1)
    r.add_argument("--seed", type=int, default=None, help="override the config base seed")
    r.add_argument("--format", choices=["csv", "json"], default="csv",
                   help="what to print to stdout (files are always both)")

    f = sub.add_parser("footnote", help="the reference dichotomy experiment preset")
    f.add_argument("--c", type=float, choices=[0.9, 4.0], required=True)
    f.add_argument("--out", type=Path, default=None)
    f.add_argument("--threads", type=int, default=1)
    f.add_argument("--runs", type=int, default=20)
    f.add_argument("--budget", type=int, default=500_000)
    f.add_argument("--seed", type=int, default=None)

    s = sub.add_parser("scaling", help="runtime/(n ln n) sweep over dimensions")
    s.add_argument("--config", type=Path, required=True, help="experiment template JSON")
    s.add_argument("--n-list", type=str, required=True, help="comma-separated dimensions")
    s.add_argument("--budget-factor", type=float, default=None,
                   help="per-n budget = factor * n * ln(n)")
    s.add_argument("--out", type=Path, default=None)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--seed", type=int, default=None)
    return p


def _cmd_constants(_args) -> int:
    alpha0, c0 = critical_constants()
    print(f"alpha0 = {alpha0:.6f}")
    print(f"c0 = {c0:.6f}")
    return 0


def _cmd_predict(args) -> int:
    dist = parse_dist(args.dist, n=args.cap)
    report = classify(dist, default_alpha_grid(args.grid_points), margin=args.margin)
    if args.csv is not None:
        report.write_csv(args.csv)
    if args.format == "json":
        print(report.to_json())
        return 0
    d = report.to_json_dict()
    print(f"distribution      {d['dist']}")
    print(f"classification    {d['classification']}")
    print(f"sup phi           {d['sup_phi']:.6f}")
    if d["classification"] == "hard":
        print(f"witness alpha     {d['witness_alpha']:.6f}")
    print(f"m1, m2            {d['m1']:.6g}, {d['m2']:.6g}")
    print(f"m2/m1             {d['m2_over_m1']:.6g}")
    print(f"p0, p1            {d['p0']:.6g}, {d['p1']:.6g}")
    print(f"s0(margin)        {d['s0']}")
    if d["cap_dominated"]:
        print("note              m2 is finite only due to the support cap")
    for name, value in d["flags"].items():
        print(f"flag {name:<22} {value}")
    return 0


def _echo_summary(summary) -> None:
    for cp in summary.checkpoints:
        print(f"evals {cp['evaluations']:>9}: ones = {100 * cp['ones_mean']:.2f}% "
              f"+- {100 * cp['ones_std']:.2f}")
    if summary.runs_reaching_max_level is not None:
        print(f"max level per run: {summary.max_level_per_run}")
        print(f"runs reaching max level: {summary.runs_reaching_max_level}")
    print(f"runs reaching optimum: {summary.runs_reaching_optimum}")
    print(f"mean runtime: {summary.mean_runtime}")


def _write_outputs(result, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(result, out_dir / "trajectories.csv")
    result.summary().write(out_dir / "summary.json")


def _cmd_run(args) -> int:
    cfg = ExperimentConfig.from_file(args.config)
    if args.seed is not None:
        doc = cfg.to_dict()
        doc["base_seed"] = args.seed
        cfg = ExperimentConfig.from_dict(doc)
    result = run_experiment(cfg, threads=args.threads)
    if args.out is not None:
        _write_outputs(result, args.out)
    if args.format == "json":
        print(json.dumps(result.summary().to_json_dict(), indent=2))
    else:
        from .harness import TRAJECTORY_HEADER, _fitness_repr

        print(TRAJECTORY_HEADER)
        for i, tr in enumerate(result.trajectories):
            for smp in tr.samples:
                print(f"{i},{smp.evaluations},{_fitness_repr(smp.fitness)},"
                      f"{float(smp.ones_fraction)!r},{smp.level}")
    return 0


def _cmd_footnote(args) -> int:
    cfg = footnote_config(args.c, runs=args.runs, budget=args.budget)
    if args.seed is not None:
        doc = cfg.to_dict()
        doc["base_seed"] = args.seed
        cfg = ExperimentConfig.from_dict(doc)
    result = run_experiment(cfg, threads=args.threads)
    summary = result.summary()
    print(f"(1+1)-EA, c = {args.c}, {args.runs} runs, hard instance n=10000, 100 levels")
    _echo_summary(summary)
    if args.out is not None:
        _write_outputs(result, args.out)
    return 0


def _cmd_scaling(args) -> int:
    with open(args.config) as fh:
        template = json.load(fh)
    if args.seed is not None:
        template["base_seed"] = args.seed
    n_list = [int(x) for x in args.n_list.split(",") if x]
    if not n_list:
        raise ConfigError("empty --n-list")
    rows = run_scaling(template, n_list, threads=args.threads,
                       budget_factor_nlogn=args.budget_factor)
    lines = ["n,mean_runtime,ratio,terminated_fraction"]
    for row in rows:
        lines.append(f"{row['n']},{row['mean_runtime']!r},{row['ratio']!r},"
                     f"{row['terminated_fraction']!r}")
        if row["warning"]:
            print(f"warning: n={row['n']}: {row['warning']}", file=sys.stderr)
    text = "\n".join(lines)
    print(text)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "scaling.csv").write_text(text + "\n")
    return 0


_COMMANDS = {
    "constants": _cmd_constants,
    "predict": _cmd_predict,
    "run": _cmd_run,
    "footnote": _cmd_footnote,
    "scaling": _cmd_scaling,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
