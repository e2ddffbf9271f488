"""
Matrices of polynomials and of exact rationals.

`PolyMatrix` houses Jacobians JX and the transformation-law matrices (a_ij).
Determinants of polynomial matrices use fraction-free Bareiss elimination with
exact polynomial division; rank, determinant and nullspace of purely rational
matrices are delegated to sympy's exact `Matrix`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

import sympy

from app.core.errors import VariableMismatchError
from app.polycore.poly import GREVLEX, MultiPoly, TermOrder, monomial_div


@dataclass(frozen=True)
class PolyMatrix:
    """Rectangular array of MultiPoly sharing one variable list."""

    entries: tuple[tuple[MultiPoly, ...], ...]

    def __post_init__(self) -> None:
        rows = self.entries
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged matrix")
            variables = rows[0][0].variables if width else None
            for r in rows:
                for p in r:
                    if p.variables != variables:
                        raise VariableMismatchError("matrix entries over different variable lists")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[MultiPoly]]) -> "PolyMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def variables(self) -> tuple[str, ...]:
        return self.entries[0][0].variables

    def __getitem__(self, ij: tuple[int, int]) -> MultiPoly:
        i, j = ij
        return self.entries[i][j]

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix.from_rows([[fn(p) for p in row] for row in self.entries])

    def evaluate(self, point: Mapping[str, Any] | Sequence[Any]) -> list[list[Any]]:
        return [[p.evaluate(point) for p in row] for row in self.entries]

    def determinant(self) -> MultiPoly:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_determinant([list(r) for r in self.entries])

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(str(p) for p in row) for row in self.entries) + "]"


def jacobian(components: Sequence[MultiPoly], variables: Sequence[str]) -> PolyMatrix:
    """Entry (i, j) = d(component_i)/d(variable_j)."""
    variables = tuple(variables)
    rows = []
    for comp in components:
        comp = comp.reorder(variables) if comp.variables != variables else comp
        rows.append([comp.diff(v) for v in variables])
    return PolyMatrix.from_rows(rows)


def exact_divide(f: MultiPoly, g: MultiPoly, order: TermOrder = GREVLEX) -> MultiPoly:
    """f / g, which must be exact (used by Bareiss)."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lm_g, lc_g = g.leading_term(order)
    quotient = MultiPoly.zero(f.variables)
    rest = f
    while not rest.is_zero():
        lm_r, lc_r = rest.leading_term(order)
        shift = monomial_div(lm_r, lm_g)
        if shift is None:
            raise ArithmeticError(f"{g} does not divide {f}")
        c = lc_r / lc_g
        quotient = quotient + MultiPoly.monomial(shift, c, f.variables)
        rest = rest - g.mul_term(shift, c)
    return quotient


def bareiss_determinant(rows: list[list[MultiPoly]]) -> MultiPoly:
    """Fraction-free determinant of a square polynomial matrix."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix has no variable list")
    a = [list(r) for r in rows]
    variables = a[0][0].variables
    sign = 1
    prev = MultiPoly.one(variables)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return MultiPoly.zero(variables)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = exact_divide(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


# ----- purely rational matrices -------------------------------------------

def to_sympy(rows: Sequence[Sequence[Fraction]]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(q.numerator, q.denominator) for q in row] for row in rows])


def from_sympy_rational(value: Any) -> Fraction:
    value = sympy.nsimplify(value) if not isinstance(value, sympy.Rational) else value
    return Fraction(int(value.p), int(value.q))


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    return int(to_sympy(rows).rank())


def rational_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    return from_sympy_rational(to_sympy(rows).det())
