"""Tests for polynomial matrices: Jacobians and determinants."""

from fractions import Fraction

import pytest

from app.polycore import PolyMatrix, jacobian, parse_poly, rational_det, rational_rank


def _rows(M: PolyMatrix):
    return [[str(p) for p in row] for row in M.entries]


def test_jacobian_of_restricted_field():
    J = jacobian([parse_poly("2x^2 - x - z", ("x", "z")), parse_poly("-2z + 3xz", ("x", "z"))], ("x", "z"))
    assert J.entries[0] == (parse_poly("4*x - 1", ("x", "z")), parse_poly("-1", ("x", "z")))
    assert J.entries[1] == (parse_poly("3*z", ("x", "z")), parse_poly("3*x - 2", ("x", "z")))


@pytest.mark.parametrize(
    "components, variables, expected",
    [
        (["x", "-y"], ("x", "y"), [["1", "0"], ["0", "-1"]]),
        (["-3*x", "-t"], ("x", "t"), [["-3", "0"], ["0", "-1"]]),
    ],
)
def test_linear_jacobians(components, variables, expected):
    J = jacobian([parse_poly(c, variables) for c in components], variables)
    assert _rows(J) == expected


def test_jacobian_evaluates_at_a_point():
    J = jacobian([parse_poly("2x^2 - x - z", ("x", "z")), parse_poly("-2z + 3xz", ("x", "z"))], ("x", "z"))
    assert J.evaluate({"x": Fraction(2, 3), "z": Fraction(2, 9)}) == [
        [Fraction(5, 3), -1],
        [Fraction(2, 3), 0],
    ]


def test_determinant_matches_expansion():
    v = ("x", "y")
    rows = [
        [parse_poly("x", v), parse_poly("y", v), parse_poly("1", v)],
        [parse_poly("y", v), parse_poly("x^2", v), parse_poly("0", v)],
        [parse_poly("1", v), parse_poly("0", v), parse_poly("x*y", v)],
    ]
    det = PolyMatrix.from_rows(rows).determinant()
    # x*(x^3 y) - y*(x y^2) + 1*(0 - x^2)
    assert det == parse_poly("x^4*y - x*y^3 - x^2", v)


def test_determinant_with_zero_pivot():
    v = ("x",)
    rows = [[parse_poly("0", v), parse_poly("x", v)], [parse_poly("1", v), parse_poly("2", v)]]
    assert PolyMatrix.from_rows(rows).determinant() == parse_poly("-x", v)


def test_rational_helpers():
    assert rational_rank([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 1
    assert rational_det([[Fraction(5, 3), Fraction(-1)], [Fraction(2, 3), Fraction(0)]]) == Fraction(2, 3)
