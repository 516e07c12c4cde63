"""Declarative plot jobs: inputs, kind, output path."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .phi import plot_phi_curve
from .trajectory import plot_trajectory

KINDS = ("trajectory", "level", "phi_curve")


@dataclass(frozen=True)
class PlotJob:
    inputs: Sequence[str]
    kind: str
    out_path: str
    labels: Optional[Sequence[str]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}; expected one of {KINDS}")
        if not self.inputs:
            raise ValueError("plot job needs at least one input CSV")
        if self.kind == "phi_curve" and len(self.inputs) != 1:
            raise ValueError("phi_curve takes exactly one input CSV")


def run_job(job: PlotJob):
    if job.kind == "phi_curve":
        label = job.labels[0] if job.labels else None
        return plot_phi_curve(job.inputs[0], job.out_path, label=label)
    return plot_trajectory(job.inputs, job.out_path, kind=job.kind, labels=job.labels)
