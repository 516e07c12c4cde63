#!/usr/bin/env python3
"""Run both arms of the reference dichotomy experiment and write trajectory
CSVs plus summaries under --out (default out/footnote)."""

import argparse
from pathlib import Path

from monolab.harness import footnote_config, run_experiment, write_trajectory_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("out/footnote"))
    ap.add_argument("--threads", type=int, default=2)
    ap.add_argument("--runs", type=int, default=20)
    args = ap.parse_args()

    for c, tag in ((0.9, "c09"), (4.0, "c40")):
        result = run_experiment(footnote_config(c, runs=args.runs), threads=args.threads)
        out = args.out / tag
        out.mkdir(parents=True, exist_ok=True)
        write_trajectory_csv(result, out / "trajectories.csv")
        summary = result.summary()
        summary.write(out / "summary.json")
        for cp in summary.checkpoints:
            print(f"c={c} @{cp['evaluations']:>7}: "
                  f"{100 * cp['ones_mean']:.2f}% +- {100 * cp['ones_std']:.2f}")
        print(f"c={c} max level per run: {summary.max_level_per_run}")


if __name__ == "__main__":
    main()
