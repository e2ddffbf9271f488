"""Small constructors shared by the test modules."""

from app.polycore import MultiPoly, parse_poly
from app.residues.foliation import AffinePoint, VectorFieldGerm


def make_field(texts, variables=("x", "y")) -> VectorFieldGerm:
    """Vector field germ from component strings over `variables`."""
    variables = tuple(variables)
    return VectorFieldGerm(variables, tuple(parse_poly(t, variables) for t in texts))


def make_point(coords, variables=("x", "y")) -> AffinePoint:
    return AffinePoint(tuple(variables), tuple(coords))


def poly(text, variables=("x", "y")) -> MultiPoly:
    return parse_poly(text, variables)
