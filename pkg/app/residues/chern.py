"""
Chern monomials, characteristic coefficients and the cohomology ring of P^n.

H*(P^n; Q) = Q[h]/(h^{n+1}) where h is the hyperplane class. A component of
codimension c and degree d has class d h^c. The global residue theorem for a
codimension-k foliation reads

    phi(N_F) = sum_Z Res(F, phi; Z) [Z]      in H^{2(k+1)}(P^n)

and only c_1(N_F) = c_1(det N_F) = m h enters the left-hand side here.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Sequence

from app.core.errors import DegreeMismatchError, UnsupportedMonomialError
from app.polycore import MultiPoly, PolyMatrix, as_rational, format_rational, parse_poly

if TYPE_CHECKING:
    from app.residues.foliation import FoliationSpec

logger = logging.getLogger(__name__)


# ----- Chern monomials ----------------------------------------------------

@dataclass(frozen=True)
class ChernMonomial:
    """phi = c_1^a_1 c_2^a_2 ... c_r^a_r, evaluated on (k+1) x (k+1) matrices."""

    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        exps = tuple(int(a) for a in self.exponents)
        if not exps or any(a < 0 for a in exps):
            raise ValueError("Chern exponents must be non-negative and non-empty")
        while len(exps) > 1 and exps[-1] == 0:
            exps = exps[:-1]
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def parse(cls, text: str, size: int | None = None) -> "ChernMonomial":
        """Read "c1^2", "c2", "c1*c2" ... (a single monomial, coefficient 1)."""
        names = re.findall(r"c(\d+)", text)
        top = max([int(i) for i in names] + [size or 1])
        variables = [f"c{i}" for i in range(1, top + 1)]
        p = parse_poly(text, variables)
        if len(p) != 1:
            raise ValueError(f"{text!r} is not a single Chern monomial")
        (exp, coeff), = p.terms.items()
        if coeff != 1:
            raise ValueError(f"{text!r} carries a coefficient; give a bare monomial")
        return cls(tuple(exp))

    @classmethod
    def c1_power(cls, k: int) -> "ChernMonomial":
        return cls((k,))

    @property
    def weighted_degree(self) -> int:
        return sum((i + 1) * a for i, a in enumerate(self.exponents))

    def padded(self, size: int) -> tuple[int, ...]:
        if len(self.exponents) > size and any(self.exponents[size:]):
            raise DegreeMismatchError(f"{self} uses classes beyond c_{size}")
        return (self.exponents + (0,) * size)[:size]

    def uses_top_class(self, size: int) -> bool:
        """True when c_{size} (the determinant) occurs; flagged in reports."""
        return len(self.exponents) >= size and self.exponents[size - 1] > 0

    def apply(self, classes: Sequence[Any]) -> Any:
        """Product of classes[i]^a_{i+1}; `classes[0]` is c_1."""
        result: Any = None
        for i, a in enumerate(self.exponents):
            if not a:
                continue
            factor = classes[i] ** a
            result = factor if result is None else result * factor
        return 1 if result is None else result

    def __str__(self) -> str:
        parts = [f"c{i + 1}" if a == 1 else f"c{i + 1}^{a}" for i, a in enumerate(self.exponents) if a]
        return "*".join(parts) or "1"


def characteristic_coefficients(M: PolyMatrix) -> list[MultiPoly]:
    """[c_0, c_1, ..., c_r]: coefficients of t^i in det(I + t M)."""
    r = M.nrows
    if r != M.ncols:
        raise ValueError("characteristic coefficients of a non-square matrix")
    variables = M.variables
    t = "t"
    while t in variables:
        t += "_"
    extended = variables + (t,)
    tv = MultiPoly.var(t, extended)
    rows = []
    for i in range(r):
        row = []
        for j in range(r):
            entry = M[i, j].reorder(extended) * tv
            row.append(entry + 1 if i == j else entry)
        rows.append(row)
    det = PolyMatrix.from_rows(rows).determinant()
    parts = det.coefficients_in(t)
    zero = MultiPoly.zero(variables)
    return [parts[i].reorder(variables) if i in parts else zero for i in range(r + 1)]


def phi_of_matrix(phi: ChernMonomial, M: PolyMatrix) -> MultiPoly:
    """phi(M) as a polynomial in the matrix entries' variables."""
    size = M.nrows
    if phi.weighted_degree != size:
        raise DegreeMismatchError(
            f"{phi} has weighted degree {phi.weighted_degree}, matrix size is {size}"
        )
    c = characteristic_coefficients(M)
    value = phi.apply([c[i + 1] for i in range(len(phi.padded(size)))])
    return value if isinstance(value, MultiPoly) else MultiPoly.constant(value, M.variables)


# ----- cohomology of P^n --------------------------------------------------

@dataclass(frozen=True)
class CohomologyClass:
    """sum_i coefficients[i] h^i in Q[h]/(h^{n+1})."""

    ambient_dim: int
    coefficients: tuple[Fraction, ...] = field(default=())

    def __post_init__(self) -> None:
        n = self.ambient_dim
        coeffs = [as_rational(c) for c in self.coefficients]
        # h^a = 0 for a > n
        coeffs = (coeffs + [Fraction(0)] * (n + 1))[: n + 1]
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def zero(cls, n: int) -> "CohomologyClass":
        return cls(n)

    @classmethod
    def hyperplane(cls, n: int) -> "CohomologyClass":
        return cls.monomial(n, 1)

    @classmethod
    def monomial(cls, n: int, degree: int, coeff: Any = 1) -> "CohomologyClass":
        coeffs = [Fraction(0)] * (n + 1)
        if degree <= n:
            coeffs[degree] = as_rational(coeff)
        return cls(n, tuple(coeffs))

    def _check(self, other: "CohomologyClass") -> None:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("classes live on projective spaces of different dimension")

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        self._check(other)
        return CohomologyClass(
            self.ambient_dim, tuple(a + b for a, b in zip(self.coefficients, other.coefficients))
        )

    def __neg__(self) -> "CohomologyClass":
        return self.scale(-1)

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        return self + (-other)

    def scale(self, c: Any) -> "CohomologyClass":
        c = as_rational(c)
        return CohomologyClass(self.ambient_dim, tuple(a * c for a in self.coefficients))

    def __mul__(self, other: Any) -> "CohomologyClass":
        if not isinstance(other, CohomologyClass):
            return self.scale(other)
        self._check(other)
        n = self.ambient_dim
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coefficients):
            if not a:
                continue
            for j, b in enumerate(other.coefficients):
                if b and i + j <= n:
                    out[i + j] += a * b
        return CohomologyClass(n, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "CohomologyClass":
        result = CohomologyClass.monomial(self.ambient_dim, 0)
        for _ in range(k):
            result = result * self
        return result

    def coefficient(self, degree: int) -> Fraction:
        return self.coefficients[degree] if 0 <= degree <= self.ambient_dim else Fraction(0)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def degrees(self) -> list[int]:
        return [i for i, a in enumerate(self.coefficients) if a]

    def to_string(self) -> str:
        pieces = []
        for i, a in enumerate(self.coefficients):
            if not a:
                continue
            mono = "" if i == 0 else ("h" if i == 1 else f"h^{i}")
            mag = abs(a)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            elif mag.denominator == 1:
                body = f"{mag.numerator}{mono}"
            else:
                body = f"({format_rational(mag)}){mono}"
            if not pieces:
                pieces.append(body if a > 0 else f"-{body}")
            else:
                pieces.append(f"{'+' if a > 0 else '-'} {body}")
        return " ".join(pieces) or "0"

    def __str__(self) -> str:
        return self.to_string()


def component_class(degree: int | None, n: int, k: int) -> CohomologyClass:
    """[Z] = d h^{k+1} for a component of codimension k+1 and degree d."""
    if degree is None or degree < 1:
        raise DegreeMismatchError(f"component degree must be a positive integer, got {degree}")
    return CohomologyClass.monomial(n, k + 1, degree)


# ----- global residue theorem ---------------------------------------------

@dataclass(frozen=True)
class ResidueTerm:
    """One summand Res(F, phi; Z) [Z] of the right-hand side."""

    component: str
    residue: Fraction
    component_class: CohomologyClass

    @property
    def contribution(self) -> CohomologyClass:
        return self.component_class.scale(self.residue)


@dataclass(frozen=True)
class GlobalCheckReport:
    lhs: CohomologyClass
    rhs: CohomologyClass
    terms: tuple[ResidueTerm, ...]

    @property
    def discrepancy(self) -> CohomologyClass:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.discrepancy.is_zero()


def normal_class_value(F: "FoliationSpec", phi: ChernMonomial) -> CohomologyClass:
    """phi(N_F) with c_1(N_F) = m h; monomials in higher c_j of N_F are refused."""
    k = F.codim
    if phi.weighted_degree != k + 1:
        raise DegreeMismatchError(f"{phi} does not have weighted degree {k + 1}")
    if any(phi.exponents[1:]):
        raise UnsupportedMonomialError(
            f"{phi}: only powers of c1 can be evaluated on the normal sheaf"
        )
    c1 = CohomologyClass.hyperplane(F.ambient_dim).scale(F.twist_degree)
    return c1 ** phi.exponents[0]


def global_check(
    F: "FoliationSpec",
    phi: ChernMonomial,
    residues: Sequence[tuple[str, Any, CohomologyClass]],
) -> GlobalCheckReport:
    """Compare phi(N_F) with sum_Z lambda_Z [Z] exactly."""
    lhs = normal_class_value(F, phi)
    terms = tuple(ResidueTerm(name, as_rational(lam), cls) for name, lam, cls in residues)
    rhs = CohomologyClass.zero(F.ambient_dim)
    for term in terms:
        rhs = rhs + term.contribution
    report = GlobalCheckReport(lhs, rhs, terms)
    if report.passed:
        logger.info("global check PASS: %s", lhs)
    else:
        logger.info("global check FAIL: lhs %s, rhs %s, discrepancy %s", lhs, rhs, report.discrepancy)
    return report
