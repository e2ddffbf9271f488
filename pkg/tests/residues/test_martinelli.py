"""Tests for the sphere-integral residue oracle.

These run real quadrature and are marked slow; `fast_sphere` loosens the
tolerance so each integral settles after a few refinements.
"""

from fractions import Fraction

import pytest

from app.core.errors import NearbyZeroError, VariableMismatchError
from app.residues.chern import ChernMonomial
from app.residues.martinelli import (
    MartinelliIntegrand,
    QuadratureResult,
    RadiusStabilityReport,
    bm_residue,
    radius_stability,
)
from tests.helpers import make_field, make_point

pytestmark = pytest.mark.slow

C1_SQ = ChernMonomial((2,))
C2 = ChernMonomial((0, 1))


def _linear_field():
    return make_field(["-3*x", "-t"], ("x", "t")), make_point((0, 0), ("x", "t"))


# ---- single radius ---------------------------------------------------------

def test_identity_field_has_unit_determinant_residue(fast_sphere):
    q = bm_residue(make_field(["x", "y"]), make_point((0, 0)), C2, 0.5, 1e-4)
    assert q.value.real == pytest.approx(1.0, abs=1e-4)
    assert abs(q.value.imag) < 1e-4
    assert q.imaginary_ok


def test_linear_field_matches_jacobian_formula(fast_sphere):
    X, p = _linear_field()
    q = bm_residue(X, p, C1_SQ, 0.5, 1e-4)
    assert q.value.real == pytest.approx(16 / 3, abs=1e-3)
    assert q.agrees_with(complex(Fraction(16, 3)), slack=1e-3)
    assert q.radii == (0.5,)
    assert q.evaluations > 0


def test_degenerate_zero(fast_sphere):
    q = bm_residue(make_field(["x^2", "y"]), make_point((0, 0)), C1_SQ, 0.3, 1e-4)
    assert q.value.real == pytest.approx(4.0, abs=1e-3)


def test_twisted_cubic_point(fast_sphere):
    X = make_field(["2*x^2 - x - z", "-2*z + 3*x*z"], ("x", "z"))
    p = make_point((Fraction(2, 3), Fraction(2, 9)), ("x", "z"))
    q = bm_residue(X, p, C1_SQ, 0.1, 1e-4)
    assert q.value.real == pytest.approx(25 / 6, abs=1e-3)


# ---- radius independence ---------------------------------------------------

def test_radius_stability(fast_sphere):
    X, p = _linear_field()
    report = radius_stability(X, p, C1_SQ, [0.1, 0.2, 0.3], 1e-4)
    assert report.passed
    assert report.radii == (0.1, 0.2, 0.3)
    assert report.max_deviation < 3e-4


def test_radius_stability_defaults_to_the_ladder(fast_sphere, monkeypatch):
    monkeypatch.setattr(fast_sphere, "RADIUS_LADDER", [0.2, 0.4])
    X, p = _linear_field()
    assert radius_stability(X, p, C1_SQ).radii == (0.2, 0.4)


def test_stability_report_flags_spread():
    results = (
        QuadratureResult(1.0 + 0j, 1e-6, 10, (0.1,)),
        QuadratureResult(1.1 + 0j, 1e-6, 10, (0.2,)),
    )
    report = RadiusStabilityReport(results, 1e-3)
    assert report.max_deviation == pytest.approx(0.1)
    assert not report.passed


# ---- refusals --------------------------------------------------------------

def test_sphere_enclosing_another_zero():
    X = make_field(["2*x^2 - x - z", "-2*z + 3*x*z"], ("x", "z"))
    with pytest.raises(NearbyZeroError):
        bm_residue(X, make_point((0, 0), ("x", "z")), C1_SQ, 1.0)


def test_integrand_needs_two_variables():
    X = make_field(["x", "y", "z"], ("x", "y", "z"))
    with pytest.raises(VariableMismatchError):
        MartinelliIntegrand(X, ChernMonomial((3,)), (0j, 0j), 0.5)


def test_negative_error_estimate_is_rejected():
    with pytest.raises(ValueError):
        QuadratureResult(0j, -1.0, 1, (0.1,))
