"""Tests for charts, twisted 1-forms, restriction to discs and dual fields."""

from fractions import Fraction

import pytest

from app.core.errors import (
    DegenerateFieldError,
    DegreeMismatchError,
    NotProjectiveFormError,
    NotTransversalError,
    VariableMismatchError,
)
from app.polycore import MultiPoly, parse_poly
from app.residues.foliation import (
    AffinePoint,
    Chart,
    DiscSlice,
    FoliationSpec,
    OneForm,
    contract,
    dehomogenize,
    det_normal_degree,
    dual_vector_field_2d,
    homogenize,
    restrict_to_disc,
)
from tests.helpers import make_field

HV = ("X", "Y", "Z", "T")
XYZ = ("x", "y", "z")


def _logarithmic() -> FoliationSpec:
    coeffs = ["Y*Z*T", "X*Z*T", "X*Y*T", "-3*X*Y*Z"]
    return FoliationSpec.from_homogeneous(OneForm(HV, tuple(parse_poly(c, HV) for c in coeffs)))


def _twisted_cubic_form() -> OneForm:
    coeffs = ["z*(2*y^2 - 3*x)", "z*(3*z - x*y)", "-(x*y^2 - 2*x^2 + y*z)"]
    return OneForm(XYZ, tuple(parse_poly(c, XYZ) for c in coeffs))


def _slice(chart: Chart, fixed: dict, free, center) -> DiscSlice:
    return DiscSlice(chart, fixed, tuple(free), AffinePoint(chart.affine_variables, center, chart=chart))


# ---- charts ----------------------------------------------------------------

def test_chart_defaults_to_lowercase_names():
    chart = Chart.of(HV, "Y")
    assert chart.affine_variables == ("x", "z", "t")
    assert chart.affine_to_homogeneous() == {"x": "X", "z": "Z", "t": "T"}
    assert chart.chart_id == 1
    assert chart.ambient_dim == 3


def test_chart_rejects_small_spaces():
    with pytest.raises(ValueError):
        Chart.of(("X", "Y"), "Y")


# ---- projective forms ------------------------------------------------------

def test_logarithmic_form_twist():
    F = _logarithmic()
    assert F.ambient_dim == 3
    assert F.codim == 1
    assert F.twist_degree == 4


def test_euler_condition_is_enforced():
    form = OneForm(("X", "Y", "Z"), tuple(parse_poly(c, ("X", "Y", "Z")) for c in ("X", "Y", "Z")))
    with pytest.raises(NotProjectiveFormError):
        FoliationSpec.from_homogeneous(form)


def test_mixed_degrees_are_rejected():
    v = ("X", "Y", "Z")
    form = OneForm(v, tuple(parse_poly(c, v) for c in ("Y + Y^2", "-X - X*Y", "0")))
    with pytest.raises(DegreeMismatchError):
        FoliationSpec.from_homogeneous(form)


def test_dehomogenize_logarithmic():
    affine = dehomogenize(_logarithmic(), Chart.of(HV, "T"))
    assert affine.variables == XYZ
    assert [str(c) for c in affine.coefficients] == ["y*z", "x*z", "x*y"]


def test_affine_presentation_survives_homogenization():
    chart = Chart.of(HV, "T")
    form = _twisted_cubic_form()
    F = FoliationSpec.from_affine(form, chart)
    assert F.twist_degree == 4
    assert dehomogenize(F, chart).coefficients == form.coefficients


def test_homogenize_rejects_zero_form():
    chart = Chart.of(HV, "T")
    with pytest.raises(NotTransversalError):
        homogenize(OneForm(XYZ, tuple(MultiPoly.zero(XYZ) for _ in XYZ)), chart)


def test_det_normal_degree():
    nd = det_normal_degree(_logarithmic())
    assert nd.m == 4
    assert nd.c1.coefficient(1) == 4
    assert nd.c1_top.coefficient(2) == 16


# ---- discs and dual fields -------------------------------------------------

def test_restriction_gives_the_dual_field():
    chart = Chart.of(HV, "T")
    disc = _slice(chart, {"y": 1}, ("x", "z"), (Fraction(2, 3), 1, Fraction(2, 9)))
    X = dual_vector_field_2d(restrict_to_disc(_twisted_cubic_form(), disc))
    assert X.variables == ("x", "z")
    assert X.components == make_field(["2*x^2 - x - z", "-2*z + 3*x*z"], ("x", "z")).components


def test_restriction_in_another_chart():
    F = _logarithmic()
    chart = Chart.of(HV, "Y")
    disc = _slice(chart, {"z": 1}, ("x", "t"), (0, 1, 0))
    X = dual_vector_field_2d(restrict_to_disc(dehomogenize(F, chart), disc))
    assert [str(c) for c in X.components] == ["-3*x", "-t"]


def test_restriction_to_a_leaf_direction_vanishes():
    chart = Chart.of(HV, "T")
    affine = dehomogenize(_logarithmic(), chart)
    disc = _slice(chart, {"x": 0}, ("y", "z"), (0, 0, 1))
    with pytest.raises(NotTransversalError):
        restrict_to_disc(affine, disc)


def test_disc_must_partition_the_chart():
    chart = Chart.of(HV, "T")
    with pytest.raises(ValueError):
        _slice(chart, {"x": 0}, ("x", "z"), (0, 0, 1))


def test_dual_field_of_a_zero_form():
    zero = MultiPoly.zero(("x", "y"))
    with pytest.raises(DegenerateFieldError):
        dual_vector_field_2d(OneForm(("x", "y"), (zero, zero)))


def test_dual_field_annihilates_the_form():
    v = ("x", "y")
    form = OneForm(v, (parse_poly("x^2*y - 1", v), parse_poly("3*y + x", v)))
    assert contract(form, dual_vector_field_2d(form)).is_zero()


def test_dual_field_needs_two_variables():
    with pytest.raises(VariableMismatchError):
        dual_vector_field_2d(_twisted_cubic_form())
