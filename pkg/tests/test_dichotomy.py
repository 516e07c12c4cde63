import math

import numpy as np
import pytest

from monolab.dichotomy import (
    UndefinedPhiError,
    classify,
    critical_constants,
    default_alpha_grid,
    phi_closed_poisson,
    phi_numeric,
    poisson_threshold,
)
from monolab.flipdist import PointMass, PoissonFlips, ZipfFlips


# -- hand-computable values -----------------------------------------------------

@pytest.mark.parametrize("alpha", [0.1, 0.25, 0.5, 0.9])
def test_single_flip_closed_form(alpha):
    ev = phi_numeric(PointMass(1), alpha)
    assert ev.value == pytest.approx(-(1 - alpha) / alpha, abs=1e-14)


def test_triple_flip_at_one_third():
    ev = phi_numeric(PointMass(3), 1 / 3)
    assert ev.value == pytest.approx(2.0, abs=1e-12)


def test_poisson_closed_form_arithmetic():
    assert phi_closed_poisson(0.5, 1.0) == pytest.approx(0.5 - math.exp(-0.5), abs=1e-15)
    assert phi_closed_poisson(0.01, 2.13692) < 0  # negative near alpha = 0


def test_closed_form_at_critical_point():
    alpha0, c0 = critical_constants()
    assert phi_closed_poisson(alpha0, c0) == pytest.approx(1.0, abs=1e-6)
    assert phi_closed_poisson(0.237134, 2.13692) == pytest.approx(1.0, abs=1e-3)


# -- numeric vs closed form -----------------------------------------------------

def test_numeric_matches_closed_form_small_grid():
    for alpha in np.linspace(0.05, 0.95, 10):
        for c in np.linspace(0.3, 4.5, 10):
            ev = phi_numeric(PoissonFlips(float(c)), float(alpha), tolerance=1e-13)
            assert ev.value == pytest.approx(phi_closed_poisson(alpha, c), abs=1e-9)
            assert ev.tail_bound <= 1e-13


def test_tail_bound_certified_and_truncation_finite():
    ev = phi_numeric(PoissonFlips(3.0), 0.002, tolerance=1e-12)
    assert ev.tail_bound <= 1e-12
    assert ev.truncation_point < 10**6


def test_undefined_phi_for_mass_at_zero():
    with pytest.raises(UndefinedPhiError):
        phi_numeric(PointMass(0), 0.3)


def test_alpha_domain_checked():
    with pytest.raises(ValueError):
        phi_numeric(PointMass(1), 0.0)
    with pytest.raises(ValueError):
        phi_numeric(PointMass(1), 1.0)


# -- critical constants -----------------------------------------------------------

def test_critical_constants_reference_values():
    alpha0, c0 = critical_constants()
    assert alpha0 == pytest.approx(0.237134, abs=1e-4)
    assert c0 == pytest.approx(2.13692, abs=1e-4)


def test_bracket_endpoints():
    from monolab.dichotomy import _f, _g_minus

    h = lambda x: _f(_g_minus(x), x)
    assert h(1e-9) < 0
    assert h(0.25) == pytest.approx(1 / 3 - math.exp(-2), abs=1e-9)
    assert h(0.25) > 0


def test_threshold_agrees_with_constants():
    _, c0 = critical_constants()
    assert poisson_threshold(1e-8) == pytest.approx(c0, abs=1e-4)


def test_sup_phi_brackets_threshold():
    from monolab.dichotomy import _sup_phi_poisson

    _, c0 = critical_constants()
    assert _sup_phi_poisson(c0 - 0.05)[0] < 1.0
    assert _sup_phi_poisson(c0 + 0.05)[0] > 1.0


def test_monotone_in_c():
    for alpha in (0.05, 0.237, 0.6):
        vals = [phi_closed_poisson(alpha, c) for c in np.linspace(0.2, 5, 25)]
        assert all(a < b for a, b in zip(vals, vals[1:]))


# -- classification ----------------------------------------------------------------

def test_rls_limit_negative_everywhere():
    report = classify(PointMass(1))
    assert report.classification == "efficient"
    assert np.all(report.phi < 0)


def test_point_mass_three_hard_with_flags():
    report = classify(PointMass(3))
    assert report.classification == "hard"
    assert report.sup_phi >= 2.0 - 1e-9
    assert report.flags["hard_p1_vs_tail"]  # 0 <= 4/9 - margin
    assert report.flags["hard_p1_vs_p3"]
    assert report.witness_alpha > 0


def test_poisson_hard_witness_near_critical_alpha():
    alpha0, c0 = critical_constants()
    report = classify(PoissonFlips(2.5), np.linspace(1e-3, 1 - 1e-3, 1000))
    assert report.classification == "hard"
    assert abs(report.witness_alpha - alpha0) < 0.1


def test_poisson_below_threshold_efficient_on_hard_instances():
    report = classify(PoissonFlips(1.9))
    assert report.classification == "efficient"


def test_zipf_kappa_between_one_and_two_flag():
    report = classify(ZipfFlips(1.5, 10**5))
    assert report.flags["hard_power_law"]


def test_classification_consistent_with_stored_values():
    for dist in (PointMass(1), PointMass(3), PoissonFlips(2.5), ZipfFlips(2.0, 10**4)):
        rep = classify(dist)
        assert rep.sup_phi == pytest.approx(float(np.max(rep.phi)))
        if rep.classification == "hard":
            assert rep.sup_phi >= 1 + rep.margin
        elif rep.classification == "efficient":
            assert rep.sup_phi <= 1 - rep.margin
        else:
            assert abs(rep.sup_phi - 1) < rep.margin


def test_default_grid_shape():
    g = default_alpha_grid()
    assert g.min() >= 1e-3 and g.max() <= 1 - 1e-3
    assert np.all(np.diff(g) > 0)
    assert 350 <= g.size <= 400


def test_report_csv_schema(tmp_path):
    rep = classify(PointMass(3), np.array([0.2, 1 / 3, 0.5]))
    out = tmp_path / "phi.csv"
    rep.write_csv(out)
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "alpha,phi"
    assert len(lines) == 4
    a, v = lines[2].split(",")
    assert float(a) == pytest.approx(1 / 3)
    assert float(v) == pytest.approx(2.0, abs=1e-12)


def test_report_json_round_trip():
    import json

    rep = classify(PoissonFlips(4.0))
    doc = json.loads(rep.to_json())
    assert doc["classification"] == "hard"
    assert doc["flags"]["hard_p1_vs_tail"]
