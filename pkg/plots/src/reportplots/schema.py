"""Readers for the harness CSV schemas.

These scripts never recompute simulation results: every plotted number comes
straight out of a CSV produced by the experiment harness, and the input
columns must match the harness schemas exactly.
"""

from __future__ import annotations

import csv

import numpy as np

TRAJECTORY_COLUMNS = ["run", "evaluations", "fitness", "ones_fraction", "level"]
PHI_COLUMNS = ["alpha", "phi"]


class SchemaError(ValueError):
    """Input file does not match the expected harness schema."""

    def __init__(self, path, message, column=None):
        self.path = str(path)
        self.column = column
        super().__init__(f"{path}: {message}")


def _check_header(path, got, want):
    if got is None:
        raise SchemaError(path, "missing header line")
    if got != want:
        offending = next((c for c in got if c not in want), None)
        if offending is None:
            offending = next((c for c in want if c not in got), "<order>")
        raise SchemaError(path, f"header {got} != {want} (offending column: {offending})",
                          column=offending)


def read_trajectories(path) -> dict[int, dict[str, np.ndarray]]:
    """Per-run arrays of evaluations, ones_fraction and level, ordered by row."""
    runs: dict[int, dict[str, list]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        _check_header(path, header, TRAJECTORY_COLUMNS)
        for row in reader:
            if not row:
                continue
            try:
                run = int(row[0])
                rec = runs.setdefault(run, {"evaluations": [], "ones_fraction": [], "level": []})
                rec["evaluations"].append(int(row[1]))
                rec["ones_fraction"].append(float(row[3]))
                rec["level"].append(int(row[4]))
            except (ValueError, IndexError) as exc:
                raise SchemaError(path, f"bad row {row!r}: {exc}") from exc
    if not runs:
        raise SchemaError(path, "no data rows")
    return {
        run: {key: np.asarray(vals) for key, vals in rec.items()}
        for run, rec in sorted(runs.items())
    }


def read_phi_curve(path) -> tuple[np.ndarray, np.ndarray]:
    alphas, phis = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        _check_header(path, header, PHI_COLUMNS)
        for row in reader:
            if not row:
                continue
            try:
                alphas.append(float(row[0]))
                phis.append(float(row[1]))
            except (ValueError, IndexError) as exc:
                raise SchemaError(path, f"bad row {row!r}: {exc}") from exc
    if not alphas:
        raise SchemaError(path, "no data rows")
    return np.asarray(alphas), np.asarray(phis)
