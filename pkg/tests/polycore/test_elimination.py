"""Tests for resultants and rational root isolation."""

import itertools
from fractions import Fraction

import pytest

from app.polycore import MultiPoly, parse_poly, rational_roots, resultant, univariate_gcd

XZ = ("x", "z")


# ---- resultant -------------------------------------------------------------

def test_resultant_projects_singular_points():
    f, g = parse_poly("2*x^2 - x - z", XZ), parse_poly("-2*z + 3*x*z", XZ)
    R = resultant(f, g, eliminate="z")
    assert R.degree_in("z") == 0
    assert rational_roots(R).values() == [Fraction(0), Fraction(1, 2), Fraction(2, 3)]


def test_resultant_trivial_cases():
    xy = ("x", "y")
    assert resultant(parse_poly("x", xy), parse_poly("y", xy), eliminate="y") == parse_poly("x", xy)
    x = ("x",)
    assert resultant(parse_poly("x - 1", x), parse_poly("x - 1", x), eliminate="x").is_zero()


def test_resultant_rejects_zero():
    with pytest.raises(ValueError):
        resultant(MultiPoly.zero(XZ), parse_poly("x", XZ), eliminate="z")


@pytest.mark.parametrize(
    "f, g",
    [
        ("2*x^2 - x - z", "-2*z + 3*x*z"),
        ("x^2 + z^2 - 2", "x - z"),
        ("x*z - 1", "x + z - 2"),
    ],
)
def test_resultant_vanishes_under_common_zeros(f, g):
    f, g = parse_poly(f, XZ), parse_poly(g, XZ)
    R = resultant(f, g, eliminate="z")
    grid = [Fraction(n, d) for n in range(-3, 4) for d in (1, 2, 3)]
    for x0, z0 in itertools.product(grid, repeat=2):
        if f.evaluate({"x": x0, "z": z0}) == 0 and g.evaluate({"x": x0, "z": z0}) == 0:
            assert R.evaluate({"x": x0, "z": 0}) == 0


# ---- rational roots --------------------------------------------------------

def test_rational_roots_of_product():
    found = rational_roots(parse_poly("x*(2*x - 1)*(3*x - 2)", ("x",)))
    assert found.values() == [Fraction(0), Fraction(1, 2), Fraction(2, 3)]
    assert found.residual.is_constant()


def test_no_rational_roots():
    p = parse_poly("x^2 + 1", ("x",))
    found = rational_roots(p)
    assert found.roots == ()
    assert found.residual == p


def test_multiplicity():
    found = rational_roots(parse_poly("x^2", ("x",)))
    assert found.roots == ((Fraction(0), 2),)


def test_partial_factorisation_leaves_residual():
    found = rational_roots(parse_poly("(x - 1/2)*(x^2 - 2)", ("x",)))
    assert found.values() == [Fraction(1, 2)]
    assert found.residual.degree_in("x") == 2


def test_zero_polynomial_has_no_root_set():
    with pytest.raises(ValueError):
        rational_roots(MultiPoly.zero(("x",)))


def test_univariate_gcd_is_monic():
    # (x - 1)(x - 2) and (x - 1)(x + 3)
    g = univariate_gcd([Fraction(2), Fraction(-3), Fraction(1)], [Fraction(-3), Fraction(2), Fraction(1)])
    assert g == [Fraction(-1), Fraction(1)]
