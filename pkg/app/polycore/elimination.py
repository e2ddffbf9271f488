"""
Elimination helpers: Sylvester resultants, rational roots, univariate gcd.

Used to solve the 2-variable singular-point systems of restricted fields:
eliminate one variable with a resultant, read off the rational roots of the
univariate result, and back-substitute. Irrational roots stay in the residual
factor returned by `rational_roots`, for the numeric path to pick up.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import sympy

from app.core.errors import UnknownVariableError
from app.polycore.matrix import bareiss_determinant
from app.polycore.poly import MultiPoly


def sylvester_matrix(f: MultiPoly, g: MultiPoly, eliminate: str) -> list[list[MultiPoly]]:
    """Sylvester matrix of f, g as polynomials in `eliminate`."""
    if eliminate not in f.variables:
        raise UnknownVariableError(eliminate, f.variables)
    m, n = f.degree_in(eliminate), g.degree_in(eliminate)
    fc, gc = f.coefficients_in(eliminate), g.coefficients_in(eliminate)
    zero = MultiPoly.zero(f.variables)
    size = m + n
    rows: list[list[MultiPoly]] = []
    for shift in range(n):
        rows.append([fc.get(m - (col - shift), zero) if 0 <= col - shift <= m else zero
                     for col in range(size)])
    for shift in range(m):
        rows.append([gc.get(n - (col - shift), zero) if 0 <= col - shift <= n else zero
                     for col in range(size)])
    return rows


def resultant(f: MultiPoly, g: MultiPoly, eliminate: str) -> MultiPoly:
    """Sylvester resultant of f and g with respect to `eliminate`."""
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of a zero polynomial")
    if f.variables != g.variables:
        g = g.reorder(f.variables)
    rows = sylvester_matrix(f, g, eliminate)
    if not rows:
        return MultiPoly.one(f.variables)
    return bareiss_determinant(rows)


# ----- univariate ---------------------------------------------------------

def _trim(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Univariate division on ascending coefficient lists."""
    a, b = _trim(list(a)), _trim(list(b))
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / b[-1]
        q[shift] = c
        for i, bc in enumerate(b):
            r[i + shift] -= c * bc
        r = _trim(r)
    return q, r


def univariate_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    """Monic gcd over Q (ascending coefficients). gcd(0, 0) = 0."""
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    return [c / a[-1] for c in a]


@dataclass(frozen=True)
class RationalRoots:
    """Rational roots with multiplicity, plus the root-free residual factor."""

    roots: tuple[tuple[Fraction, int], ...]
    residual: MultiPoly

    def values(self) -> list[Fraction]:
        return [r for r, _ in self.roots]


def _integer_coefficients(coeffs: Sequence[Fraction]) -> list[int]:
    den = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    return [int(c * den) for c in coeffs]


def rational_roots(p: MultiPoly) -> RationalRoots:
    """All rational roots of a nonzero univariate polynomial, with multiplicity.

    Rational root theorem on the integer-scaled polynomial, deflating each
    root found; the residual factor has no rational roots left.
    """
    if p.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    name, coeffs = p.univariate_coefficients()
    if name is None:
        return RationalRoots((), p)
    coeffs = list(coeffs)
    found: dict[Fraction, int] = {}

    # zero roots first
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        found[Fraction(0)] = found.get(Fraction(0), 0) + 1

    changed = True
    while changed and len(coeffs) > 1:
        changed = False
        ints = _integer_coefficients(coeffs)
        a0, an = abs(ints[0]), abs(ints[-1])
        candidates = sorted(
            {Fraction(s * num, den) for num in sympy.divisors(a0) for den in sympy.divisors(an) for s in (1, -1)}
        )
        for r in candidates:
            q, rem = poly_divmod(coeffs, [-r, Fraction(1)])
            if not rem:
                found[r] = found.get(r, 0) + 1
                coeffs = q
                changed = True
                break
    residual = MultiPoly.from_univariate(coeffs, name, p.variables)
    return RationalRoots(tuple(sorted(found.items())), residual)
