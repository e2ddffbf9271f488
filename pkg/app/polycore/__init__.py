"""Exact polynomial arithmetic, parsing, calculus and ideal primitives over Q."""

from app.polycore.elimination import RationalRoots, rational_roots, resultant, univariate_gcd
from app.polycore.groebner import (
    INFINITE,
    GroebnerResult,
    Ideal,
    NormalForm,
    express_in_generators,
    groebner,
    groebner_with_cofactors,
    minimal_polynomial,
    normal_form,
    quotient_dimension,
    standard_monomials,
)
from app.polycore.matrix import PolyMatrix, jacobian, rational_det, rational_rank
from app.polycore.parser import parse_poly
from app.polycore.poly import GREVLEX, MultiPoly, Rational, TermOrder, as_rational, format_rational

__all__ = [
    "GREVLEX",
    "INFINITE",
    "GroebnerResult",
    "Ideal",
    "MultiPoly",
    "NormalForm",
    "PolyMatrix",
    "Rational",
    "RationalRoots",
    "TermOrder",
    "as_rational",
    "express_in_generators",
    "format_rational",
    "groebner",
    "groebner_with_cofactors",
    "jacobian",
    "minimal_polynomial",
    "normal_form",
    "parse_poly",
    "quotient_dimension",
    "rational_det",
    "rational_rank",
    "rational_roots",
    "resultant",
    "standard_monomials",
    "univariate_gcd",
]
