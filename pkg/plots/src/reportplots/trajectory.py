"""Render trajectory CSVs: per-run curves plus a mean +- std band.

One band per input file, x = evaluations, y = ones_fraction (or the level
column with --kind level). Runs that stop early hold their last recorded
state, which matches how the harness accounts terminated runs.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .schema import SchemaError, read_trajectories

_COLORS = ["tab:blue", "tab:red", "tab:green", "tab:orange", "tab:purple"]


@dataclass(frozen=True)
class TrajectoryPlot:
    out_path: str
    terminal_means: tuple  # final band mean per input file
    runs_per_file: tuple


def _band(runs: dict, column: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Forward-filled mean and std over runs on the union evaluation grid."""
    grid = np.unique(np.concatenate([rec["evaluations"] for rec in runs.values()]))
    filled = np.empty((len(runs), grid.size))
    for i, rec in enumerate(runs.values()):
        idx = np.searchsorted(rec["evaluations"], grid, side="right") - 1
        idx = np.clip(idx, 0, rec[column].size - 1)
        filled[i] = rec[column][idx]
    return grid, filled.mean(axis=0), filled.std(axis=0, ddof=1) if len(runs) > 1 else np.zeros(grid.size)


def plot_trajectory(csv_paths, out_path, kind: str = "trajectory",
                    labels=None) -> TrajectoryPlot:
    """Draw every input file as thin per-run curves plus its mean band.

    `kind` selects the y column: "trajectory" plots the ones fraction,
    "level" the level counter. Raises SchemaError before creating any file
    when an input is empty or malformed.
    """
    if kind not in ("trajectory", "level"):
        raise ValueError(f"unknown plot kind {kind!r}")
    column = "ones_fraction" if kind == "trajectory" else "level"
    paths = [Path(p) for p in csv_paths]
    if not paths:
        raise ValueError("no input files")
    if labels is None:
        labels = [p.stem for p in paths]
    loaded = [read_trajectories(p) for p in paths]

    fig, ax = plt.subplots(figsize=(8, 5))
    terminal = []
    for i, (runs, label) in enumerate(zip(loaded, labels)):
        color = _COLORS[i % len(_COLORS)]
        for rec in runs.values():
            ax.plot(rec["evaluations"], rec[column], color=color, alpha=0.25, lw=0.6)
        grid, mean, std = _band(runs, column)
        ax.plot(grid, mean, color=color, lw=2.0, label=f"{label} (mean of {len(runs)})")
        ax.fill_between(grid, mean - std, mean + std, color=color, alpha=0.2)
        terminal.append(float(mean[-1]))
    ax.set_xlabel("evaluations")
    ax.set_ylabel("fraction of one-bits" if column == "ones_fraction" else "level")
    ax.legend(loc="lower right")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return TrajectoryPlot(out_path=str(out_path), terminal_means=tuple(terminal),
                          runs_per_file=tuple(len(r) for r in loaded))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csvs", nargs="+", help="trajectory CSV files")
    ap.add_argument("--out", required=True, help="output image (svg by default)")
    ap.add_argument("--kind", choices=["trajectory", "level"], default="trajectory")
    ap.add_argument("--labels", default=None, help="comma-separated curve labels")
    args = ap.parse_args(argv)
    labels = args.labels.split(",") if args.labels else None
    try:
        result = plot_trajectory(args.csvs, args.out, kind=args.kind, labels=labels)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    means = ", ".join(f"{m:.4f}" for m in result.terminal_means)
    print(f"wrote {result.out_path} (terminal means: {means})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
