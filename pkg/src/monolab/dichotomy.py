"""Numeric dichotomy functional and the critical mutation-strength constants.

For a flip-count distribution with weights p_s and a hot-topic fraction
alpha, the dichotomy functional is

    Phi = E[s(s-1)(1-a)^(s-1)] / E[s(1-a)^(s-1)]
          - ((1-a)/a) * Pr[s=1] / E[s(1-a)^(s-1)].

Values above 1 predict exponential stagnation on some hard instance with
that hot-topic fraction; values below 1 over all fractions predict
O(n log n) optimisation. For the Poisson law the functional collapses to the
closed form ((1-a)/a) * (c*a - exp(-(1-a)*c)), whose critical parameter
c0 = 2.13692.. (attained at alpha0 = 0.237134..) is recovered here by
bisection.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import optimize

from .flipdist import FlipCountDistribution, MomentReport, ZipfFlips

__all__ = [
    "PhiEvaluation",
    "DichotomyReport",
    "UndefinedPhiError",
    "phi_numeric",
    "phi_closed_poisson",
    "critical_constants",
    "poisson_threshold",
    "classify",
    "default_alpha_grid",
]


class UndefinedPhiError(ValueError):
    """Raised when the denominator expectation vanishes (no bit is ever flipped)."""


@dataclass(frozen=True)
class PhiEvaluation:
    alpha: float
    value: float
    truncation_point: int
    tail_bound: float


def _geo_tail(t: float, m: int) -> float:
    """sum_{s > m} s^2 t^(s-1), exact closed form (stable, no cancellation)."""
    u = 1.0 - t
    tm = t**m
    if tm == 0.0:
        return 0.0
    return tm * ((m + 1) ** 2 / u + 2.0 * (m + 1) * t / u**2 + t * (1.0 + t) / u**3)


def phi_numeric(
    dist: FlipCountDistribution,
    alpha: float,
    tolerance: float = 1e-12,
    block: int = 4096,
) -> PhiEvaluation:
    """Evaluate the functional by summation with a certified truncation.

    Summation stops once sup_{s>m} pmf(s) * sum_{s>m} s^2 (1-alpha)^(s-1)
    drops below the tolerance, which dominates the truncated mass of every
    expectation involved.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0,1), got {alpha}")
    t = 1.0 - alpha
    s1 = 0.0  # E[s (1-a)^(s-1)]
    s2 = 0.0  # E[s(s-1) (1-a)^(s-1)]
    m = 0
    tail = math.inf
    cap = dist.support_max
    while True:
        hi = m + block
        if cap is not None:
            hi = min(hi, cap + 1)
        ks = np.arange(m + 1, hi, dtype=np.float64)
        if ks.size:
            ps = dist.pmf_block(m + 1, hi)
            geo = t ** (ks - 1.0)
            s1 += float(np.dot(ps, ks * geo))
            s2 += float(np.dot(ps, ks * (ks - 1.0) * geo))
        m = hi - 1
        if cap is not None and m >= cap:
            tail = 0.0
            break
        tail = _geo_tail(t, m) * dist.pmf_sup_tail(m)
        if tail <= tolerance:
            break
    if s1 <= 0.0:
        raise UndefinedPhiError("E[s(1-alpha)^(s-1)] = 0; distribution never flips a bit")
    p1 = dist.pmf(1)
    value = s2 / s1 - (t / alpha) * p1 / s1
    return PhiEvaluation(alpha=alpha, value=value, truncation_point=m, tail_bound=tail)


def phi_closed_poisson(alpha: float, c: float) -> float:
    """Closed form of the functional for a Poisson(c) flip count."""
    return (1.0 - alpha) / alpha * (c * alpha - math.exp(-(1.0 - alpha) * c))


# -- critical constants ------------------------------------------------------


def _f(c: float, x: float) -> float:
    return c * x - math.exp(-c * (1.0 - x)) - x / (1.0 - x)


def _df_dx(c: float, x: float) -> float:
    return c - c * math.exp(-c * (1.0 - x)) - 1.0 / (1.0 - x) ** 2


def _g_minus(x: float) -> float:
    return (1.0 - math.sqrt(1.0 - 4.0 * x)) / (2.0 * x * (1.0 - x))


def critical_constants(tolerance: float = 1e-10) -> tuple[float, float]:
    """(alpha0, c0): the unique critical point of the Poisson functional.

    alpha0 is the root of h(x) = f(g_minus(x), x) on (0, 1/4], where
    g_minus(x) = (1 - sqrt(1-4x)) / (2x(1-x)) and
    f(c, x) = c x - exp(-c(1-x)) - x/(1-x); then c0 = g_minus(alpha0).
    The bracket is guaranteed: h(0+) = -1/e < 0 and h(1/4) = 1/3 - 1/e^2 > 0.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    h = lambda x: _f(_g_minus(x), x)
    alpha0 = float(optimize.bisect(h, 1e-9, 0.25, xtol=tolerance))
    c0 = _g_minus(alpha0)
    # both f and df/dx must vanish at the critical point
    if abs(_f(c0, alpha0)) > 1e-6 or abs(_df_dx(c0, alpha0)) > 1e-6:
        raise RuntimeError("critical point failed its stationarity cross-check")
    return alpha0, c0


def _sup_phi_poisson(c: float, grid_size: int = 2048) -> tuple[float, float]:
    """(sup over alpha of the closed form, argmax), grid scan + golden polish."""
    lin = np.linspace(1e-4, 1.0 - 1e-4, grid_size // 2)
    geo = np.geomspace(1e-6, 0.5, grid_size // 2)
    grid = np.unique(np.concatenate([lin, geo]))
    vals = (1.0 - grid) / grid * (c * grid - np.exp(-(1.0 - grid) * c))
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    a, b = _golden_max(lambda x: phi_closed_poisson(x, c), lo, hi)
    return b, a


def _golden_max(fn, lo: float, hi: float, iters: int = 90) -> tuple[float, float]:
    """Golden-section maximisation on [lo, hi]; returns (argmax, max)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = fn(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = fn(x1)
    xm = 0.5 * (a + b)
    return xm, fn(xm)


def poisson_threshold(tolerance: float = 1e-6) -> float:
    """Smallest c whose closed-form functional reaches 1 for some alpha.

    Outer bisection over c of (sup_alpha Phi(alpha, c) - 1); the supremum is
    strictly increasing in c, which certifies the bracket.
    """
    lo, hi = 0.5, 5.0
    gap = lambda c: _sup_phi_poisson(c)[0] - 1.0
    if gap(lo) >= 0 or gap(hi) <= 0:
        raise RuntimeError("threshold bracket [0.5, 5] failed")
    return float(optimize.bisect(gap, lo, hi, xtol=tolerance))


# -- classification ----------------------------------------------------------


def default_alpha_grid(points: int = 400) -> np.ndarray:
    """Hybrid grid on (1e-3, 1-1e-3): geometric near zero plus uniform."""
    half = points // 2
    geo = np.geomspace(1e-3, 1.0 - 1e-3, half)
    lin = np.linspace(1e-3, 1.0 - 1e-3, points - half)
    return np.unique(np.concatenate([geo, lin]))


@dataclass(frozen=True)
class DichotomyReport:
    dist_spec: str
    alpha_grid: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    sup_phi: float
    witness_alpha: float
    classification: str  # "efficient" | "hard" | "inconclusive"
    margin: float
    moments: MomentReport
    s0: Optional[int]
    flags: dict

    def to_json_dict(self) -> dict:
        return {
            "dist": self.dist_spec,
            "classification": self.classification,
            "sup_phi": self.sup_phi,
            "witness_alpha": self.witness_alpha,
            "margin": self.margin,
            "m1": self.moments.m1,
            "m2": self.moments.m2,
            "m2_over_m1": self.moments.m2_over_m1,
            "p0": self.moments.p0,
            "p1": self.moments.p1,
            "s0": self.s0,
            "cap_dominated": self.moments.cap_dominated,
            "cap_tail_mass": self.moments.cap_tail_mass,
            "flags": self.flags,
            "grid_points": int(self.alpha_grid.size),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    def write_csv(self, path) -> None:
        """Two-column curve for plotting; schema is exactly `alpha,phi`."""
        with open(path, "w") as fh:
            fh.write("alpha,phi\n")
            for a, v in zip(self.alpha_grid, self.phi):
                fh.write(f"{float(a)!r},{float(v)!r}\n")


def classify(
    dist: FlipCountDistribution,
    alpha_grid: Optional[np.ndarray] = None,
    margin: float = 1e-3,
    tolerance: float = 1e-10,
) -> DichotomyReport:
    """Grid evaluation of the functional plus the sufficient-condition flags.

    Efficient when the grid supremum stays below 1 - margin, hard when any
    value reaches 1 + margin (the argmax is the witness), inconclusive
    otherwise. The flags mirror the moment criteria: they are one-sided
    sufficient conditions, independent of the grid scan.
    """
    if margin <= 0:
        raise ValueError("margin must be positive")
    grid = default_alpha_grid() if alpha_grid is None else np.asarray(alpha_grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0) or np.any(grid >= 1):
        raise ValueError("alpha grid must lie inside (0,1)")
    phi = np.array([phi_numeric(dist, a, tolerance=tolerance).value for a in grid])
    i = int(np.argmax(phi))
    sup_phi = float(phi[i])
    witness = float(grid[i])
    if sup_phi >= 1.0 + margin:
        classification = "hard"
    elif sup_phi <= 1.0 - margin:
        classification = "efficient"
    else:
        classification = "inconclusive"

    rep = dist.moments()
    s0 = rep.s0(margin)
    p_ge3 = max(0.0, 1.0 - rep.p0 - rep.p1 - dist.pmf(2))
    flags = {
        "efficient_moments": rep.m2_over_m1 <= 1.0 - margin,
        # heuristic smallness cutoff p1*s0 <= 0.1 for "p1 small compared to s0"
        "hard_moments": (
            rep.m2_over_m1 >= 1.0 + margin and s0 is not None and rep.p1 * s0 <= 0.1
        ),
        "hard_power_law": isinstance(dist, ZipfFlips) and 1.0 < dist.kappa < 2.0,
        "hard_p1_vs_tail": rep.p1 <= (4.0 / 9.0) * p_ge3 - margin,
        # variant comparing against Pr[D = 3] alone, reported for audit
        "hard_p1_vs_p3": rep.p1 < (4.0 / 9.0) * dist.pmf(3),
    }
    return DichotomyReport(
        dist_spec=dist.spec_string(),
        alpha_grid=grid,
        phi=phi,
        sup_phi=sup_phi,
        witness_alpha=witness,
        classification=classification,
        margin=margin,
        moments=rep,
        s0=s0,
        flags=flags,
    )
