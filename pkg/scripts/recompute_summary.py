#!/usr/bin/env python3
"""Recompute checkpoint statistics from a raw trajectory CSV and compare them
against an emitted summary JSON. Standard library only, independent of the
simulation package; exits nonzero on any disagreement above 1e-9.

Usage: recompute_summary.py OUTPUT_DIR   (expects trajectories.csv + summary.json)
"""

import csv
import json
import math
import sys
from pathlib import Path

TOL = 1e-9


def main(argv):
    if len(argv) != 2:
        print(__doc__, file=sys.stderr)
        return 2
    out_dir = Path(argv[1])
    with open(out_dir / "summary.json") as fh:
        summary = json.load(fh)
    per_run = {}
    with open(out_dir / "trajectories.csv") as fh:
        reader = csv.DictReader(fh)
        expect = ["run", "evaluations", "fitness", "ones_fraction", "level"]
        if reader.fieldnames != expect:
            print(f"schema mismatch: {reader.fieldnames} != {expect}", file=sys.stderr)
            return 1
        for row in reader:
            per_run.setdefault(int(row["run"]), []).append(
                (int(row["evaluations"]), float(row["ones_fraction"]), int(row["level"])))

    failures = 0
    for cp in summary["checkpoints"]:
        at = cp["evaluations"]
        vals = []
        for rows in per_run.values():
            state = rows[0][1]
            for evals, frac, _ in rows:
                if evals <= at:
                    state = frac
            vals.append(state)
        mean = sum(vals) / len(vals)
        if len(vals) > 1:
            var = sum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
            std = math.sqrt(var)
        else:
            std = 0.0
        for name, got, want in (("ones_mean", mean, cp["ones_mean"]),
                                ("ones_std", std, cp["ones_std"])):
            if abs(got - want) > TOL:
                print(f"mismatch at {at} {name}: recomputed {got!r}, summary {want!r}",
                      file=sys.stderr)
                failures += 1

    max_levels = [max(lv for _, _, lv in rows) for _, rows in sorted(per_run.items())]
    if max_levels != summary["max_level_per_run"]:
        print(f"mismatch max_level_per_run: {max_levels} != {summary['max_level_per_run']}",
              file=sys.stderr)
        failures += 1

    if failures:
        return 1
    print(f"ok: {len(summary['checkpoints'])} checkpoints, {len(per_run)} runs")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
