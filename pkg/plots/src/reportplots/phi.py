"""Render a dichotomy curve CSV: phi against alpha with the threshold at 1.

The first upward crossing of the phi = 1 line, if any, is marked; curves
entirely below the line render without a marker.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .schema import SchemaError, read_phi_curve


@dataclass(frozen=True)
class PhiPlot:
    out_path: str
    crossing_alpha: float | None  # first alpha where the curve reaches 1
    sup_phi: float


def plot_phi_curve(csv_path, out_path, label=None) -> PhiPlot:
    alpha, phi = read_phi_curve(csv_path)
    order = np.argsort(alpha)
    alpha, phi = alpha[order], phi[order]

    crossing = None
    above = np.nonzero(phi >= 1.0)[0]
    if above.size:
        i = int(above[0])
        if i == 0 or phi[i] == 1.0:
            crossing = float(alpha[i])
        else:  # linear interpolation between the bracketing grid points
            a0, a1 = alpha[i - 1], alpha[i]
            p0, p1 = phi[i - 1], phi[i]
            crossing = float(a0 + (1.0 - p0) * (a1 - a0) / (p1 - p0))

    fig, ax = plt.subplots(figsize=(7, 4.5))
    if alpha.size == 1:
        ax.plot(alpha, phi, "o", color="tab:blue", label=label)
    else:
        ax.plot(alpha, phi, color="tab:blue", lw=1.8, label=label)
    ax.axhline(1.0, color="black", lw=1.0, ls="--", label="threshold 1")
    if crossing is not None:
        ax.axvline(crossing, color="tab:red", lw=1.0, ls=":")
        ax.plot([crossing], [1.0], "o", color="tab:red",
                label=f"crossing at {crossing:.4f}")
    ax.set_xlabel("hot-topic fraction")
    ax.set_ylabel("phi")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return PhiPlot(out_path=str(out_path), crossing_alpha=crossing,
                   sup_phi=float(phi.max()))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", help="two-column curve file (alpha,phi)")
    ap.add_argument("--out", required=True, help="output image (svg by default)")
    ap.add_argument("--label", default=None)
    args = ap.parse_args(argv)
    try:
        result = plot_phi_curve(args.csv, args.out, label=args.label)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    mark = f"crossing at {result.crossing_alpha:.4f}" if result.crossing_alpha else "no crossing"
    print(f"wrote {result.out_path} ({mark}, sup {result.sup_phi:.4f})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
