"""Tests for Grothendieck residues at points and per singular component."""

from fractions import Fraction

import pytest

from app.core.errors import ComponentMissedError, DegeneratePointError, GenericityError
from app.polycore import parse_poly
from app.residues.chern import ChernMonomial
from app.residues.foliation import AffinePoint, Chart, DiscSlice, FoliationSpec, OneForm
from app.residues.residue import (
    ResidueValue,
    chern_eval,
    grothendieck_monomial,
    grothendieck_nondegenerate,
    grothendieck_transformation,
    residue_at_point,
    residue_for_component,
    series_inverse,
)
from app.residues.singular import SingularComponent
from tests.helpers import make_field, make_point

C1_SQ = ChernMonomial((2,))
C2 = ChernMonomial((0, 1))

HV = ("X", "Y", "Z", "T")
XYZ = ("x", "y", "z")
CHART_T = Chart.of(HV, "T")

TWISTED_CUBIC_FIELD = make_field(["2*x^2 - x - z", "-2*z + 3*x*z"], ("x", "z"))


def _twisted_cubic_foliation() -> FoliationSpec:
    coeffs = ["z*(2*y^2 - 3*x)", "z*(3*z - x*y)", "-(x*y^2 - 2*x^2 + y*z)"]
    return FoliationSpec.from_affine(OneForm(XYZ, tuple(parse_poly(c, XYZ) for c in coeffs)), CHART_T)


def _param(name, coords, degree):
    return SingularComponent(
        name, CHART_T, degree=degree, parametrization=tuple(parse_poly(c, ("s",)) for c in coords)
    )


# ---- Chern monomials on matrices -------------------------------------------

@pytest.mark.parametrize(
    "phi, matrix, expected",
    [
        (C1_SQ, [[-3, 0], [0, -1]], 16),
        (C2, [[-3, 0], [0, -1]], 3),
        (C1_SQ, [[1, 0], [0, -1]], 0),
        (C2, [[0, 1], [1, 0]], -1),
    ],
)
def test_chern_eval(phi, matrix, expected):
    assert chern_eval(phi, matrix) == expected


# ---- nondegenerate zeros ---------------------------------------------------

def test_jacobian_formula():
    X = make_field(["-3*x", "-t"], ("x", "t"))
    r = grothendieck_nondegenerate(X, make_point((0, 0), ("x", "t")), C1_SQ)
    assert r.value == Fraction(16, 3)
    assert r.method == "jacobian-formula"
    assert r.exact
    assert r.error_bound is None


def test_top_class_is_flagged():
    r = grothendieck_nondegenerate(make_field(["y", "x"]), make_point((0, 0)), C2)
    assert r.value == 1
    assert r.uses_top_class


@pytest.mark.parametrize(
    "point, expected",
    [
        ((Fraction(2, 3), Fraction(2, 9)), Fraction(25, 6)),
        ((Fraction(1, 2), 0), Fraction(-1, 2)),
        ((0, 0), Fraction(9, 2)),
    ],
)
def test_twisted_cubic_point_residues(point, expected):
    p = make_point(point, ("x", "z"))
    assert grothendieck_nondegenerate(TWISTED_CUBIC_FIELD, p, C1_SQ).value == expected


@pytest.mark.parametrize("point", [(Fraction(2, 3), Fraction(2, 9)), (Fraction(1, 2), 0), (0, 0)])
def test_transformation_law_agrees_with_jacobian_formula(point):
    p = make_point(point, ("x", "z"))
    law = grothendieck_transformation(TWISTED_CUBIC_FIELD, p, C1_SQ)
    assert law.method == "transformation-law"
    assert law.value == grothendieck_nondegenerate(TWISTED_CUBIC_FIELD, p, C1_SQ).value


def test_point_off_the_zero_set():
    with pytest.raises(ComponentMissedError):
        grothendieck_nondegenerate(TWISTED_CUBIC_FIELD, make_point((1, 1), ("x", "z")), C1_SQ)


def test_jacobian_formula_refuses_degenerate_points():
    with pytest.raises(DegeneratePointError):
        grothendieck_nondegenerate(make_field(["x^2", "y"]), make_point((0, 0)), C1_SQ)


# ---- degenerate zeros ------------------------------------------------------

def test_degenerate_monomial_zero():
    r = grothendieck_transformation(make_field(["x^2", "y"]), make_point((0, 0)), C1_SQ)
    assert r.value == 4


def test_residue_at_point_picks_the_method():
    pr = residue_at_point(make_field(["x^2", "y"]), make_point((0, 0)), C1_SQ)
    assert pr.multiplicity == 2
    assert not pr.nondegenerate
    assert pr.residue.method == "transformation-law"
    assert pr.residue.value == 4


def test_degenerate_zero_with_a_unit_factor():
    # x^2 (1 + x): the local relation carries the unit 1 + x
    r = grothendieck_transformation(make_field(["x^2 + x^3", "y"]), make_point((0, 0)), C1_SQ)
    assert r.value == 3


def test_translated_degenerate_zero():
    r = grothendieck_transformation(make_field(["(x - 1)^2", "y + 2"]), make_point((1, -2)), C1_SQ)
    assert r.value == 4


# ---- rescaling -------------------------------------------------------------

@pytest.mark.parametrize("c", [Fraction(-3, 2), -1, 7])
@pytest.mark.parametrize(
    "field, point",
    [
        (TWISTED_CUBIC_FIELD, make_point((Fraction(2, 3), Fraction(2, 9)), ("x", "z"))),
        (TWISTED_CUBIC_FIELD, make_point((0, 0), ("x", "z"))),
        (make_field(["x^2 + x^3", "y"]), make_point((0, 0))),
    ],
)
def test_residue_is_unchanged_by_rescaling_the_field(field, point, c):
    base = residue_at_point(field, point, C1_SQ).residue.value
    assert residue_at_point(field.scale(c), point, C1_SQ).residue.value == base


def test_monomial_residue_and_series_inverse():
    h = parse_poly("4*x^2 + 4*x + 1", ("x", "y"))
    assert grothendieck_monomial(h, (2, 1)) == 4
    assert series_inverse([Fraction(1), Fraction(1)], 4) == [1, -1, 1, -1]
    with pytest.raises(ZeroDivisionError):
        series_inverse([Fraction(0), Fraction(1)], 2)


def test_residue_value_provenance_rules():
    with pytest.raises(ValueError):
        ResidueValue(Fraction(1), "jacobian-formula", error_bound=1e-9)
    with pytest.raises(ValueError):
        ResidueValue(1.0 + 0j, "martinelli-numeric")
    assert ResidueValue(Fraction(1), "jacobian-formula", error_bound=1e-9, rationalized=True).exact


# ---- per component ---------------------------------------------------------

GAMMA = _param("Gamma", ["2/3*s^2", "s", "2/9*s^3"], 3)
CONIC = _param("Q", ["1/2*s^2", "s", "0"], 2)
LINE = _param("L", ["0", "s", "0"], 1)


@pytest.mark.parametrize(
    "component, center, expected",
    [
        (GAMMA, (Fraction(2, 3), 1, Fraction(2, 9)), Fraction(25, 6)),
        (CONIC, (Fraction(1, 2), 1, 0), Fraction(-1, 2)),
        (LINE, (0, 1, 0), Fraction(9, 2)),
    ],
)
def test_twisted_cubic_component_residues(component, center, expected):
    disc = DiscSlice(CHART_T, {"y": 1}, ("x", "z"), AffinePoint(XYZ, center, chart=CHART_T))
    result = residue_for_component(
        _twisted_cubic_foliation(), component, C1_SQ, disc, components=[GAMMA, CONIC, LINE]
    )
    assert result.residue.value == expected
    assert result.residue.component == component.name
    assert result.genericity.passed
    assert len(result.points) == 1


def test_non_generic_disc_raises():
    Z1 = SingularComponent("Z1", CHART_T, degree=1, parametrization=tuple(parse_poly(c, ("s",)) for c in ("0", "0", "s")))
    F = FoliationSpec.from_affine(
        OneForm(XYZ, tuple(parse_poly(c, XYZ) for c in ("y*z", "x*z", "x*y"))), CHART_T
    )
    disc = DiscSlice(CHART_T, {"z": 0}, ("x", "y"), AffinePoint(XYZ, (0, 0, 0), chart=CHART_T))
    Z2 = SingularComponent("Z2", CHART_T, degree=1, parametrization=tuple(parse_poly(c, ("s",)) for c in ("0", "s", "0")))
    with pytest.raises(GenericityError) as exc:
        residue_for_component(F, Z1, C1_SQ, disc, components=[Z1, Z2])
    assert "disjoint" in exc.value.failed


def test_component_given_by_equations():
    eqs = (parse_poly("x", XYZ), parse_poly("z", XYZ))
    Z = SingularComponent("L", CHART_T, degree=1, equations=eqs)
    disc = DiscSlice(CHART_T, {"y": 1}, ("x", "z"), AffinePoint(XYZ, (0, 1, 0), chart=CHART_T))
    result = residue_for_component(_twisted_cubic_foliation(), Z, C1_SQ, disc, components=[Z])
    assert result.residue.value == Fraction(9, 2)


def test_irrational_cluster_is_averaged_over_its_conjugates():
    # restricted to y = 1 the dual field is (x^2 - 2, z), zeros at x = +-sqrt(2)
    coeffs = ("-z", "0", "x^2 - 2*y^2")
    F = FoliationSpec.from_affine(OneForm(XYZ, tuple(parse_poly(c, XYZ) for c in coeffs)), CHART_T)
    eqs = (parse_poly("x^2 - 2*y^2", XYZ), parse_poly("z", XYZ))
    Z = SingularComponent("C", CHART_T, degree=2, equations=eqs)
    disc = DiscSlice(CHART_T, {"y": 1}, ("x", "z"), AffinePoint(XYZ, (0, 1, 0), chart=CHART_T))
    result = residue_for_component(F, Z, C1_SQ, disc, check=False)
    assert len(result.points) == 2
    assert result.residue.value == 2
    assert result.residue.rationalized
    assert result.residue.averaged_over == 2
    assert result.residue.description == "jacobian-formula, averaged over 2 conjugates"


def test_single_point_description_is_the_method():
    r = grothendieck_nondegenerate(TWISTED_CUBIC_FIELD, make_point((0, 0), ("x", "z")), C1_SQ)
    assert r.description == "jacobian-formula"
