"""
Grothendieck residues of restricted vector fields.

    Res_p[ phi(JX) dz_1 ^ ... ^ dz_{k+1} / (X_1 ... X_{k+1}) ]

At a nondegenerate zero this is phi(JX(p)) / det JX(p). At a degenerate
isolated zero the transformation law is used: with P_i(z_i) the minimal
polynomial of z_i modulo (X_1, ..., X_{k+1}), split as z_i^{m_i} u_i(z_i)
with u_i(0) != 0, and cofactors P_i = sum_j b_ij X_j from the Groebner
basis, the residue equals the coefficient of z^{m-1} in

    phi(JX) det(b) / (u_1 ... u_{k+1})

expanded as a power series. When the ideal is already local the u_i are 1
and this is the plain z^m = a X rule.

The Baum-Bott residue of a component Z is the residue of the foliation
restricted to a disc meeting Z transversally at a generic point.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Literal, Sequence

from app.core.config import settings
from app.core.errors import (
    ComponentMissedError,
    ConvergenceError,
    DegeneratePointError,
    DegreeMismatchError,
    GenericityError,
    NonIsolatedError,
)
from app.polycore import (
    Ideal,
    MultiPoly,
    PolyMatrix,
    as_rational,
    express_in_generators,
    groebner_with_cofactors,
    jacobian,
    minimal_polynomial,
    quotient_dimension,
)
from app.residues.chern import ChernMonomial, phi_of_matrix
from app.residues.foliation import (
    AffinePoint,
    DiscSlice,
    FoliationSpec,
    VectorFieldGerm,
    dehomogenize,
    dual_vector_field_2d,
    restrict_to_disc,
)
from app.residues.singular import (
    GenericityReport,
    SingularComponent,
    check_genericity,
    isolated_points_2d,
    local_multiplicity,
)

logger = logging.getLogger(__name__)

ResidueMethod = Literal["jacobian-formula", "transformation-law", "martinelli-numeric"]

__all__ = [
    "ChernMonomial",
    "ComponentResidue",
    "PointResidue",
    "ResidueValue",
    "chern_eval",
    "component_cluster",
    "grothendieck_monomial",
    "grothendieck_nondegenerate",
    "grothendieck_transformation",
    "residue_at_point",
    "residue_for_component",
    "series_inverse",
]


@dataclass(frozen=True)
class ResidueValue:
    """A residue with provenance. Exact values carry no error bound."""

    value: Any  # Fraction when exact, complex when numeric
    method: ResidueMethod
    point: AffinePoint | None = None
    component: str | None = None
    error_bound: float | None = None
    rationalized: bool = False
    uses_top_class: bool = False
    averaged_over: int = 1

    def __post_init__(self) -> None:
        if isinstance(self.value, Fraction) and self.error_bound is not None and not self.rationalized:
            raise ValueError("exact residues carry no error bound")
        if not isinstance(self.value, Fraction) and self.error_bound is None:
            raise ValueError("numeric residues need an error bound")

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    @property
    def description(self) -> str:
        if self.averaged_over > 1:
            return f"{self.method}, averaged over {self.averaged_over} conjugates"
        return self.method


@dataclass(frozen=True)
class PointResidue:
    """Per-point breakdown: where, how singular, and the two Jacobian ingredients."""

    point: AffinePoint
    multiplicity: int
    nondegenerate: bool
    residue: ResidueValue
    phi_value: Any = None
    det_value: Any = None


@dataclass(frozen=True)
class ComponentResidue:
    component: str
    residue: ResidueValue
    points: tuple[PointResidue, ...]
    field: VectorFieldGerm
    genericity: GenericityReport | None = None


# ----- Chern monomials on matrices ----------------------------------------

def _constant_matrix(M: Sequence[Sequence[Any]]) -> PolyMatrix:
    rows = [[MultiPoly.constant(as_rational(v), ()) for v in row] for row in M]
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix must be square")
    return PolyMatrix.from_rows(rows)


def chern_eval(phi: ChernMonomial, M: Sequence[Sequence[Any]]) -> Fraction:
    """prod_i c_i(M)^a_i with c_i the t^i coefficient of det(I + tM)."""
    value = phi_of_matrix(phi, _constant_matrix(M))
    return value.constant_value()


# ----- residues at a point ------------------------------------------------

def _is_zero_of(X: VectorFieldGerm, p: AffinePoint, tol: float) -> bool:
    values = p.as_dict()
    if p.exact:
        return all(c.evaluate(values) == 0 for c in X.components)
    return all(abs(complex(c.evaluate(values))) <= tol for c in X.components)


def _jacobian_ingredients(X: VectorFieldGerm, p: AffinePoint, phi: ChernMonomial) -> tuple[Any, Any]:
    J = jacobian(X.components, X.variables)
    values = p.project(X.variables).as_dict()
    return phi_of_matrix(phi, J).evaluate(values), J.determinant().evaluate(values)


def grothendieck_nondegenerate(
    X: VectorFieldGerm, p: AffinePoint, phi: ChernMonomial, *, tol: float | None = None
) -> ResidueValue:
    """phi(JX(p)) / det JX(p); exact at rational points."""
    tol = tol or settings.NUMERIC_CERT_TOL ** 0.5
    p = p.project(X.variables)
    if not _is_zero_of(X, p, tol):
        raise ComponentMissedError(f"{p} is not a zero of the field ({X})")
    num, det = _jacobian_ingredients(X, p, phi)
    if (det == 0) if p.exact else abs(det) <= tol:
        raise DegeneratePointError(f"det JX vanishes at {p}")
    if p.exact:
        return ResidueValue(num / det, "jacobian-formula", p, uses_top_class=phi.uses_top_class(X.dim))
    value = complex(num) / complex(det)
    bound = tol * max(1.0, abs(value))
    return ResidueValue(value, "jacobian-formula", p, error_bound=bound, uses_top_class=phi.uses_top_class(X.dim))


def grothendieck_monomial(h: MultiPoly, m: Sequence[int]) -> Fraction:
    """Res[h dz / (z_1^m_1 ... z_r^m_r)] = coefficient of z^(m-1) in h."""
    if len(m) != h.nvars or any(mi < 1 for mi in m):
        raise ValueError("monomial denominator exponents must be positive, one per variable")
    return h.coefficient([mi - 1 for mi in m])


def series_inverse(coeffs: Sequence[Fraction], order: int) -> list[Fraction]:
    """First `order` coefficients of 1/u for u = sum coeffs[i] z^i, u(0) != 0."""
    if not coeffs or coeffs[0] == 0:
        raise ZeroDivisionError("series inverse needs a nonzero constant term")
    u0 = coeffs[0]
    inv: list[Fraction] = []
    for k in range(order):
        if k == 0:
            inv.append(1 / u0)
            continue
        acc = sum((coeffs[j] * inv[k - j] for j in range(1, min(k, len(coeffs) - 1) + 1)), Fraction(0))
        inv.append(-acc / u0)
    return inv


def grothendieck_transformation(
    X: VectorFieldGerm,
    p: AffinePoint,
    phi: ChernMonomial,
    *,
    step_budget: int | None = None,
) -> ResidueValue:
    """Residue at a rational isolated zero, degenerate or not, by the transformation law."""
    if not p.exact:
        raise ValueError("the transformation law needs a rational point")
    p = p.project(X.variables)
    Xp = X.translate(p)
    variables = Xp.variables
    if any(c.is_zero() for c in Xp.components):
        raise NonIsolatedError(f"field component vanishes identically: ({X})")
    result = groebner_with_cofactors(Ideal(Xp.components), step_budget=step_budget)
    if result.basis.is_unit():
        raise ComponentMissedError(f"{p} is not a zero of the field ({X})")
    budget = quotient_dimension(result.basis) + settings.MULTIPLICITY_SLACK

    rows: list[list[MultiPoly]] = []
    exponents: list[int] = []
    units: list[list[Fraction]] = []
    for name in variables:
        P = minimal_polynomial(name, result.basis, step_budget=step_budget)
        _, coeffs = P.univariate_coefficients()
        m = next(i for i, c in enumerate(coeffs) if c != 0)
        if m == 0:
            raise ComponentMissedError(f"{p} is not a zero of the field ({X})")
        if m > budget:
            raise NonIsolatedError(f"{name}^{m} exceeds the exponent budget {budget}")
        cofactors = express_in_generators(P, result)
        if cofactors is None:  # pragma: no cover - P lies in the ideal by construction
            raise ArithmeticError(f"minimal polynomial of {name} not in the ideal")
        rows.append(cofactors)
        exponents.append(m)
        units.append(list(coeffs[m:]))
    logger.debug("transformation law at %s: exponents %s", p, exponents)

    det_b = PolyMatrix.from_rows(rows).determinant()
    h = phi_of_matrix(phi, jacobian(Xp.components, variables))
    g = (h * det_b).truncate(exponents)
    for name, m, u in zip(variables, exponents, units):
        inv = MultiPoly.from_univariate(series_inverse(u, m), name, variables)
        g = (g * inv).truncate(exponents)
    value = grothendieck_monomial(g, exponents)
    return ResidueValue(value, "transformation-law", p, uses_top_class=phi.uses_top_class(X.dim))


def residue_at_point(
    X: VectorFieldGerm,
    p: AffinePoint,
    phi: ChernMonomial,
    *,
    step_budget: int | None = None,
) -> PointResidue:
    """Best applicable method: Jacobian formula when nondegenerate, else the transformation law."""
    p = p.project(X.variables)
    num, det = _jacobian_ingredients(X, p, phi)
    if p.exact:
        mu = local_multiplicity(X, p)
        if mu == 0:
            raise ComponentMissedError(f"{p} is not a zero of the field ({X})")
        if det != 0:
            value = grothendieck_nondegenerate(X, p, phi)
        else:
            value = grothendieck_transformation(X, p, phi, step_budget=step_budget)
        return PointResidue(p, mu, det != 0, value, num, det)
    value = grothendieck_nondegenerate(X, p, phi)
    return PointResidue(p, 1, True, value, num, det)


# ----- per component ------------------------------------------------------

def component_cluster(
    Z: SingularComponent, X: VectorFieldGerm, slice: DiscSlice, *, tol: float | None = None
) -> list[AffinePoint]:
    """Zeros of the restricted field where the disc meets Z.

    A parametrized component meets the disc at its declared centre. For a
    component given by equations the cluster is every isolated zero of X
    whose full chart coordinates satisfy those equations.
    """
    tol = tol or settings.NUMERIC_CERT_TOL ** 0.5
    if Z.is_parametrized:
        return [slice.center_in_disc()]
    cluster = []
    for sp in isolated_points_2d(X):
        coords = dict(slice.fixed)
        coords.update(sp.point.as_dict())
        if sp.exact:
            on = all(e.evaluate(coords) == 0 for e in Z.equations or ())
        else:
            coords = {k: complex(v) for k, v in coords.items()}
            on = all(abs(complex(e.evaluate(coords))) <= tol for e in Z.equations or ())
        if on:
            cluster.append(sp.point)
    return cluster


def _rationalize(value: complex, spread: float) -> Fraction:
    tol = settings.RATIONALIZE_TOL
    if abs(value.imag) > max(tol, spread):
        raise ConvergenceError(f"averaged residue {value} is not real")
    q = Fraction(value.real).limit_denominator(settings.RATIONALIZE_MAX_DENOMINATOR)
    if abs(float(q) - value.real) > max(tol, spread):
        raise ConvergenceError(f"no rational within {tol} of {value.real}")
    return q


def residue_for_component(
    F: FoliationSpec,
    Z: SingularComponent,
    phi: ChernMonomial,
    slice: DiscSlice,
    *,
    components: Sequence[SingularComponent] | None = None,
    check: bool = True,
    step_budget: int | None = None,
) -> ComponentResidue:
    """lambda_Z = Res_phi(F restricted to a transversal disc; p)."""
    k = F.codim
    if phi.weighted_degree != k + 1:
        raise DegreeMismatchError(f"{phi} does not have weighted degree {k + 1}")
    genericity = None
    if check:
        genericity = check_genericity(Z, slice, components or [Z], codim=k)
        if not genericity.passed:
            raise GenericityError(Z.name, genericity.failed)

    affine = dehomogenize(F, slice.chart)
    restricted = restrict_to_disc(affine, slice)
    X = dual_vector_field_2d(restricted)
    logger.info("component %s: restricted field (%s) on %s", Z.name, X, slice.free)

    cluster = component_cluster(Z, X, slice)
    if not cluster:
        raise ComponentMissedError(f"disc {dict(slice.fixed)} meets no zero of the field on {Z.name}")
    for p in cluster:
        if p.exact and not _is_zero_of(X, p, 0.0):
            raise ComponentMissedError(f"disc centre {p} is not a singular point of ({X})")

    points = tuple(residue_at_point(X, p, phi, step_budget=step_budget) for p in cluster)
    top = phi.uses_top_class(k + 1)
    if all(pr.residue.exact for pr in points):
        total = sum((pr.residue.value for pr in points), Fraction(0)) / len(points)
        if len({pr.residue.value for pr in points}) > 1:
            logger.warning("component %s: residues differ across the cluster, reporting the mean", Z.name)
        value = ResidueValue(
            total, points[0].residue.method, points[0].point, Z.name,
            uses_top_class=top, averaged_over=len(points),
        )
    else:
        values = [complex(pr.residue.value) for pr in points]
        mean = sum(values) / len(values)
        spread = max(abs(v - mean) for v in values) + max(pr.residue.error_bound or 0.0 for pr in points)
        q = _rationalize(mean, spread)
        value = ResidueValue(
            q, "jacobian-formula", points[0].point, Z.name,
            error_bound=spread, rationalized=True, uses_top_class=top, averaged_over=len(points),
        )
    logger.info("component %s: residue %s via %s", Z.name, value.value, value.method)
    return ComponentResidue(Z.name, value, points, X, genericity)
