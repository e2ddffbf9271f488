"""Tests for the exact polynomial type and its parser.

Worked examples pin the canonical term map; hypothesis covers the ring
axioms and the calculus rules on small random polynomials.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from app.core.errors import PolySyntaxError, UnknownVariableError, VariableMismatchError
from app.polycore import MultiPoly, as_rational, format_rational, parse_poly

VARS = ("x", "y")


def _poly_strategy(variables=VARS, max_terms=4, max_degree=3):
    exps = st.tuples(*[st.integers(0, max_degree) for _ in variables])
    coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda t: MultiPoly(variables, t))


polys = _poly_strategy()


# ---- parsing ---------------------------------------------------------------

def test_parse_implicit_multiplication():
    p = parse_poly("2x^2 - x - z", ["x", "z"])
    assert dict(p.terms) == {(2, 0): 2, (1, 0): -1, (0, 1): -1}


def test_parse_rationals_and_parentheses():
    p = parse_poly("1/2*(x + y)^2 - 3/4", VARS)
    assert p.coefficient((2, 0)) == Fraction(1, 2)
    assert p.coefficient((1, 1)) == 1
    assert p.coefficient((0, 0)) == Fraction(-3, 4)


def test_parse_juxtaposed_names_split_into_declared_variables():
    assert parse_poly("yz", ["x", "y", "z"]) == parse_poly("y*z", ["x", "y", "z"])


def test_parse_power_operators_agree():
    assert parse_poly("x**3", VARS) == parse_poly("x^3", VARS)


def test_unknown_variable_is_named():
    with pytest.raises(UnknownVariableError) as exc:
        parse_poly("x + w", VARS)
    assert exc.value.name == "w"
    assert exc.value.offset == 4


def test_syntax_error_reports_byte_offset():
    with pytest.raises(PolySyntaxError) as exc:
        parse_poly("x + * y", VARS)
    assert exc.value.offset == 4


@pytest.mark.parametrize("text", ["", "x +", "(x + y", "x^y", "1/0"])
def test_malformed_expressions(text):
    with pytest.raises(PolySyntaxError):
        parse_poly(text, VARS)


# ---- rationals -------------------------------------------------------------

def test_as_rational_refuses_floats():
    with pytest.raises(TypeError):
        as_rational(0.5)
    assert as_rational("16/3") == Fraction(16, 3)


def test_format_rational_drops_unit_denominator():
    assert format_rational(Fraction(4)) == "4"
    assert format_rational(Fraction(-1, 2)) == "-1/2"


# ---- structure -------------------------------------------------------------

def test_zero_coefficients_are_dropped():
    p = MultiPoly(VARS, {(1, 0): 1, (0, 1): 0})
    assert len(p) == 1
    assert (p - p).is_zero()


def test_homogeneity_and_degrees():
    p = parse_poly("x^2*y - 3*y^3", VARS)
    assert p.is_homogeneous()
    assert p.total_degree() == 3
    assert p.degree_in("x") == 2
    assert not parse_poly("x + 1", VARS).is_homogeneous()


def test_mixed_variable_lists_are_rejected():
    with pytest.raises(VariableMismatchError):
        parse_poly("x", VARS) + parse_poly("x", ("x", "z"))


def test_substitute_composes():
    p = parse_poly("x*y", VARS)
    s = MultiPoly.var("s", ("s",))
    image = p.substitute({"x": s * s, "y": s + 1}, ("s",))
    assert image == parse_poly("s^3 + s^2", ("s",))


def test_translate_recentres():
    p = parse_poly("x^2 - 2*x + 1", VARS)
    assert p.translate({"x": 1}) == parse_poly("x^2", VARS)


def test_evaluate_exact_and_complex():
    p = parse_poly("x^2 + y", VARS)
    assert p.evaluate({"x": Fraction(1, 2), "y": 3}) == Fraction(13, 4)
    assert p.evaluate([1j, 0]) == -1


def test_evaluate_missing_variable():
    with pytest.raises(UnknownVariableError):
        parse_poly("x + y", VARS).evaluate({"x": 1})


# ---- ring axioms -----------------------------------------------------------

@hsettings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@hsettings(max_examples=60, deadline=None)
@given(polys, polys)
def test_leibniz_rule(f, g):
    for v in VARS:
        assert (f * g).diff(v) == f.diff(v) * g + f * g.diff(v)


@hsettings(max_examples=40, deadline=None)
@given(polys)
def test_printed_form_parses_back(f):
    assert parse_poly(str(f), VARS) == f
