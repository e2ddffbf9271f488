"""Tests for Groebner bases, normal forms and the quotient algebra.

sympy's own `groebner` serves as the oracle for reduced bases.
"""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from app.core.errors import BudgetExceededError, NonIsolatedError
from app.polycore import (
    INFINITE,
    Ideal,
    MultiPoly,
    groebner,
    groebner_with_cofactors,
    minimal_polynomial,
    normal_form,
    parse_poly,
    quotient_dimension,
    standard_monomials,
)
from app.polycore.groebner import contains, express_in_generators

XY = ("x", "y")
XYZ = ("x", "y", "z")


def _ideal(texts, variables=XY) -> Ideal:
    return Ideal.of([parse_poly(t, variables) for t in texts])


def _to_sympy(p: MultiPoly):
    return sympy.expand(sympy.sympify(str(p).replace("^", "**")))


def _sympy_basis(texts, variables):
    gens = sympy.symbols(variables)
    exprs = [sympy.sympify(t.replace("^", "**")) for t in texts]
    return {sympy.expand(e) for e in sympy.groebner(exprs, *gens, order="grevlex", domain="QQ").exprs}


# ---- worked examples -------------------------------------------------------

def test_basis_of_monomial_and_linear():
    G = groebner(_ideal(["x^2", "y"]))
    assert set(G.generators) == {parse_poly("y", XY), parse_poly("x^2", XY)}
    assert G.is_groebner


def test_monomial_ideal_is_already_reduced():
    G = groebner(_ideal(["y*z", "x*z", "x*y"], XYZ))
    assert set(G.generators) == {parse_poly(t, XYZ) for t in ("y*z", "x*z", "x*y")}


def test_inconsistent_generators_give_unit_ideal():
    G = groebner(_ideal(["x - 1", "x"]))
    assert G.is_unit()
    assert G.generators == (MultiPoly.one(XY),)


def test_normal_form_example():
    G = groebner(_ideal(["x^2", "y"]))
    nf = normal_form(parse_poly("4*x^2 + 4*x + 1", XY), G)
    assert nf.remainder == parse_poly("4*x + 1", XY)
    assert nf.reconstruct() == parse_poly("4*x^2 + 4*x + 1", XY)
    assert not nf.is_member


def test_membership():
    I = _ideal(["x^2 - y", "x*y - 1"])
    assert contains(I, parse_poly("x^3 - 1", XY))
    assert not contains(I, parse_poly("x - 2", XY))


def test_zero_generators():
    with pytest.raises(ValueError):
        Ideal((MultiPoly.zero(XY),))
    assert Ideal.of([MultiPoly.zero(XY), parse_poly("x", XY)]).generators == (parse_poly("x", XY),)


# ---- sympy oracle ----------------------------------------------------------

@pytest.mark.parametrize(
    "texts, variables",
    [
        (["x^2 - y", "x*y - 1"], XY),
        (["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"], XY),
        (["x*y - z", "y*z - x", "x*z - y"], XYZ),
        (["2*x^2 - x - z", "-2*z + 3*x*z"], ("x", "z")),
    ],
)
def test_reduced_basis_matches_sympy(texts, variables):
    ours = {_to_sympy(g) for g in groebner(_ideal(texts, variables)).generators}
    assert ours == _sympy_basis(texts, variables)


@pytest.mark.parametrize("texts", [["x^2 - y", "x*y - 1"], ["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"]])
def test_idempotent(texts):
    G = groebner(_ideal(texts))
    again = groebner_with_cofactors(Ideal(G.generators, G.order)).basis
    assert set(again.generators) == set(G.generators)


def test_cofactors_reproduce_basis():
    I = _ideal(["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"])
    result = groebner_with_cofactors(I)
    for g, row in zip(result.basis.generators, result.cofactors):
        total = MultiPoly.zero(XY)
        for c, f in zip(row, result.inputs):
            total = total + c * f
        assert total == g


def test_express_in_generators():
    I = _ideal(["x^2 - y", "x*y - 1"])
    result = groebner_with_cofactors(I)
    f = parse_poly("x^3 - 1", XY)
    cofactors = express_in_generators(f, result)
    assert cofactors is not None
    assert cofactors[0] * I.generators[0] + cofactors[1] * I.generators[1] == f
    assert express_in_generators(parse_poly("x", XY), result) is None


def test_step_budget_is_enforced():
    with pytest.raises(BudgetExceededError):
        groebner(_ideal(["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"]), step_budget=1)


# ---- quotient algebra ------------------------------------------------------

@hsettings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4))
def test_quotient_of_monomial_complete_intersection(a, b):
    assert quotient_dimension(_ideal([f"x^{a}", f"y^{b}"])) == a * b


def test_coordinate_axes_have_infinite_quotient():
    assert quotient_dimension(_ideal(["x*y", "x*z", "y*z"], XYZ)) == INFINITE


def test_standard_monomials():
    assert standard_monomials(_ideal(["x^2", "y"])) == [(0, 0), (1, 0)]
    assert standard_monomials(_ideal(["x*y"])) is None


def test_singular_points_of_restricted_field_count():
    # three simple zeros
    assert quotient_dimension(_ideal(["2*x^2 - x - z", "-2*z + 3*x*z"], ("x", "z"))) == 3


def test_minimal_polynomial():
    I = _ideal(["x^2 - 2", "y - x"])
    assert minimal_polynomial("y", I) == parse_poly("y^2 - 2", XY)
    assert minimal_polynomial("x", _ideal(["x^2", "y"])) == parse_poly("x^2", XY)


def test_minimal_polynomial_needs_finite_quotient():
    with pytest.raises(NonIsolatedError):
        minimal_polynomial("x", _ideal(["x*y"]))


def test_minimal_polynomial_is_monic():
    p = minimal_polynomial("x", _ideal(["3*x^2 - 1", "y"]))
    assert p.coefficient((2, 0)) == 1
    assert p.coefficient((0, 0)) == Fraction(-1, 3)
