"""
Singular sets: the coefficient ideal, declared components, isolated zeros.

Components are declared by the user (a rational parametrization in one
parameter, or defining equations, always in a named chart) and verified
here against the singular ideal. Restricted 2-variable fields are solved
exactly where possible: a Groebner basis certifies the zero set is finite, a
resultant plus the rational root theorem finds the rational abscissae, and
back-substitution finds the ordinates. Whatever the quotient dimension says
is still unaccounted for is found numerically from the residual factor and
accepted only when Newton's iteration contracts onto it.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from app.core.config import settings
from app.core.errors import ConvergenceError, NonIsolatedError, VariableMismatchError
from app.polycore import (
    INFINITE,
    Ideal,
    MultiPoly,
    as_rational,
    groebner,
    jacobian,
    normal_form,
    quotient_dimension,
    rational_rank,
    rational_roots,
    resultant,
    univariate_gcd,
)
from app.residues.foliation import AffinePoint, Chart, DiscSlice, OneForm, VectorFieldGerm

logger = logging.getLogger(__name__)


# ----- types --------------------------------------------------------------

@dataclass(frozen=True)
class SingularComponent:
    """A declared irreducible component of Sing(F) in one chart.

    Either `parametrization` (n polynomials in `parameter`, giving the chart's
    affine coordinates) or `equations` (polynomials in the chart variables)
    is set, never both.
    """

    name: str
    chart: Chart
    degree: int | None = None
    parametrization: tuple[MultiPoly, ...] | None = None
    equations: tuple[MultiPoly, ...] | None = None
    parameter: str = "s"
    center_parameter: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if (self.parametrization is None) == (self.equations is None):
            raise ValueError(f"component {self.name!r}: give a parametrization or equations")
        if self.parametrization is not None:
            params = tuple(p.reorder((self.parameter,)) for p in self.parametrization)
            if len(params) != self.chart.ambient_dim:
                raise VariableMismatchError(
                    f"component {self.name!r}: {len(params)} coordinates, chart has {self.chart.ambient_dim}"
                )
            object.__setattr__(self, "parametrization", params)
        else:
            eqs = tuple(e.reorder(self.chart.affine_variables) for e in self.equations or ())
            if not eqs or any(e.is_zero() for e in eqs):
                raise ValueError(f"component {self.name!r}: equations must be nonzero")
            object.__setattr__(self, "equations", eqs)
        object.__setattr__(self, "center_parameter", as_rational(self.center_parameter))

    @classmethod
    def from_homogeneous_parametrization(
        cls,
        name: str,
        chart: Chart,
        coordinates: Sequence[MultiPoly],
        **kwargs: Any,
    ) -> "SingularComponent":
        """Accept n+1 homogeneous coordinate polynomials; the chart entry must be a nonzero constant."""
        if len(coordinates) != chart.ambient_dim + 1:
            raise VariableMismatchError("homogeneous parametrization needs n+1 entries")
        pivot = coordinates[chart.chart_id]
        if not pivot.is_constant() or pivot.is_zero():
            raise ValueError(
                f"component {name!r}: coordinate {chart.chart_variable} must be a nonzero constant in this chart"
            )
        c = pivot.constant_value()
        affine = tuple(p.scale(1 / c) for i, p in enumerate(coordinates) if i != chart.chart_id)
        return cls(name, chart, parametrization=affine, **kwargs)

    @property
    def is_parametrized(self) -> bool:
        return self.parametrization is not None

    def point_at(self, value: Any | None = None) -> AffinePoint:
        s = self.center_parameter if value is None else as_rational(value)
        coords = tuple(p.evaluate({self.parameter: s}) for p in self.parametrization or ())
        return AffinePoint(self.chart.affine_variables, coords, chart=self.chart)

    def tangent_at(self, value: Any | None = None) -> tuple[Fraction, ...]:
        s = self.center_parameter if value is None else as_rational(value)
        return tuple(p.diff(self.parameter).evaluate({self.parameter: s}) for p in self.parametrization or ())

    def parametrization_degree(self) -> int:
        return max(1, max(p.total_degree() for p in self.parametrization or ()))

    def homogeneous_parametrization(self) -> list[MultiPoly]:
        """n+1 polynomials in the parameter, chart coordinate set to 1."""
        params = list(self.parametrization or ())
        one = MultiPoly.one((self.parameter,))
        a2h = self.chart.affine_to_homogeneous()
        by_name = {a2h[a]: p for a, p in zip(self.chart.affine_variables, params)}
        by_name[self.chart.chart_variable] = one
        return [by_name[h] for h in self.chart.homogeneous_variables]

    def homogeneous_equations(self) -> list[MultiPoly]:
        hv = self.chart.homogeneous_variables
        a2h = self.chart.affine_to_homogeneous()
        c_index = self.chart.chart_id
        out = []
        for e in self.equations or ():
            d = e.total_degree()
            terms = {}
            for exp, coef in e.terms.items():
                h = [0] * len(hv)
                for name, k in zip(e.variables, exp):
                    h[hv.index(a2h[name])] = k
                h[c_index] = d - sum(exp)
                terms[tuple(h)] = coef
            out.append(MultiPoly(hv, terms))
        return out


@dataclass(frozen=True)
class SingularPoint2D:
    point: AffinePoint
    multiplicity: int
    nondegenerate: bool
    minimal_polynomial: str | None = None  # factor tag for numeric clusters

    @property
    def exact(self) -> bool:
        return self.point.exact


@dataclass(frozen=True)
class VerificationReport:
    component: str
    passed: bool
    method: str
    witnesses: tuple[tuple[str, MultiPoly], ...] = ()
    degree_consistent: bool | None = None


@dataclass(frozen=True)
class GenericityReport:
    component: str
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def failed(self) -> list[str]:
        return [k for k, ok in self.checks.items() if not ok]


# ----- singular ideal and verification ------------------------------------

def singular_ideal(form: OneForm) -> Ideal:
    """Ideal generated by the coefficients of an affine 1-form."""
    ideal = Ideal.of(form.coefficients)
    logger.debug("singular ideal %s", ideal)
    return ideal


def singular_set_is_empty(ideal: Ideal) -> bool:
    return bool(ideal.generators) and groebner(ideal).is_unit()


def verify_component(Z: SingularComponent, I: Ideal) -> VerificationReport:
    """Check that Z lies in V(I); failure is reported with the nonzero witnesses."""
    if I.generators and I.variables != Z.chart.affine_variables:
        raise VariableMismatchError(
            f"component {Z.name!r} lives in chart {Z.chart}, ideal is over {I.variables}"
        )
    witnesses: list[tuple[str, MultiPoly]] = []
    if Z.is_parametrized:
        target = (Z.parameter,)
        mapping = dict(zip(Z.chart.affine_variables, Z.parametrization or ()))
        for g in I.generators:
            image = g.substitute(mapping, target)
            if not image.is_zero():
                witnesses.append((str(g), image))
        degree_ok = None if Z.degree is None else Z.degree == Z.parametrization_degree()
        method = "substitution"
    else:
        G = groebner(Ideal.of(Z.equations or ()))
        for g in I.generators:
            r = normal_form(g, G).remainder
            if not r.is_zero():
                witnesses.append((str(g), r))
        degree_ok = None
        method = "normal-form"
    passed = not witnesses and degree_ok is not False
    if passed:
        logger.info("component %s verified (%s)", Z.name, method)
    else:
        logger.info(
            "component %s FAILED verification: %d witnesses, degree consistent=%s",
            Z.name, len(witnesses), degree_ok,
        )
    return VerificationReport(Z.name, passed, method, tuple(witnesses), degree_ok)


# ----- isolated zeros of 2-variable fields --------------------------------

def _field_ideal(X: VectorFieldGerm) -> Ideal:
    return Ideal.of(X.components)


def local_multiplicity(X: VectorFieldGerm, p: AffinePoint) -> int:
    """dim Q[z]/(X(z+p), m^N), increased in N until it stops growing."""
    Xp = X.translate(p)
    variables = Xp.variables
    previous: int | None = None
    N = 1
    while True:
        power_gens = [
            MultiPoly.monomial(e, 1, variables)
            for e in itertools.product(range(N + 1), repeat=len(variables))
            if sum(e) == N
        ]
        d = quotient_dimension(Ideal.of(list(Xp.components) + power_gens))
        if d == 0 or d == previous:
            return int(d)
        previous = int(d)
        N += 1


def _det_jacobian(X: VectorFieldGerm) -> MultiPoly:
    return jacobian(X.components, X.variables).determinant()


def _restrict_first(p: MultiPoly, first: str, value: Fraction, second: str) -> list[Fraction]:
    q = p.substitute({first: value}, (second,))
    if q.is_zero():
        return []
    _, coeffs = q.univariate_coefficients()
    return coeffs


def _rational_points(X: VectorFieldGerm) -> list[tuple[Fraction, Fraction]]:
    a, b = X.variables
    f, g = X.components
    R = resultant(f, g, eliminate=b)
    if R.is_zero():
        raise NonIsolatedError(f"resultant of {f} and {g} vanishes: common factor")
    found = rational_roots(R.reorder(X.variables)) if not R.is_constant() else None
    abscissae = found.values() if found else []
    points = []
    for x0 in abscissae:
        fb = _restrict_first(f, a, x0, b)
        gb = _restrict_first(g, a, x0, b)
        common = univariate_gcd(fb, gb)
        if not common:
            raise NonIsolatedError(f"line {a} = {x0} lies in the zero set")
        if len(common) == 1:
            continue
        roots = rational_roots(MultiPoly.from_univariate(common, b, (b,)))
        for y0 in roots.values():
            points.append((x0, y0))
    return sorted(set(points))


def _newton_certify(X: VectorFieldGerm, start: np.ndarray, tol: float) -> np.ndarray | None:
    J = jacobian(X.components, X.variables)
    z = start.astype(complex)
    steps: list[float] = []
    for _ in range(settings.NEWTON_MAX_STEPS):
        F = np.array([c.evaluate(list(z)) for c in X.components], dtype=complex)
        M = np.array(J.evaluate(list(z)), dtype=complex)
        try:
            delta = np.linalg.solve(M, F)
        except np.linalg.LinAlgError:
            return None
        z = z - delta
        step = float(np.linalg.norm(delta))
        steps.append(step)
        if step <= tol * (1 + float(np.linalg.norm(z))):
            break
    else:
        return None
    if len(steps) > 1 and steps[-1] >= steps[0]:
        return None
    residual = max(abs(complex(c.evaluate(list(z)))) for c in X.components)
    if residual > np.sqrt(tol) * (1 + float(np.linalg.norm(z))):
        return None
    return z


def _numeric_points(
    X: VectorFieldGerm, rational: list[tuple[Fraction, Fraction]], tol: float
) -> list[tuple[complex, complex, str]]:
    a, b = X.variables
    f, g = X.components
    R = resultant(f, g, eliminate=b)
    if R.is_constant():
        return []
    residual = rational_roots(R.reorder(X.variables)).residual
    if residual.is_constant():
        abscissae: list[complex] = [complex(r) for r in {x for x, _ in rational}]
        tag = None
    else:
        _, coeffs = residual.univariate_coefficients()
        abscissae = [complex(r) for r in np.roots([float(c) for c in reversed(coeffs)])]
        abscissae += [complex(r) for r in {x for x, _ in rational}]
        tag = str(residual)
    found: list[tuple[complex, complex, str]] = []
    for x0 in abscissae:
        candidates: list[complex] = []
        for comp in (f, g):
            parts = comp.coefficients_in(b)
            top = max(parts)
            coeffs = [complex(parts[k].evaluate({a: x0, b: 0})) if k in parts else 0j for k in range(top + 1)]
            while len(coeffs) > 1 and abs(coeffs[-1]) < tol:
                coeffs.pop()
            if len(coeffs) > 1:
                candidates += [complex(r) for r in np.roots(list(reversed(coeffs)))]
        for y0 in candidates:
            z = _newton_certify(X, np.array([x0, y0]), tol)
            if z is None:
                continue
            exact_match = any(
                abs(z[0] - complex(px)) < 1e-8 and abs(z[1] - complex(py)) < 1e-8 for px, py in rational
            )
            duplicate = any(abs(z[0] - u) < 1e-8 and abs(z[1] - v) < 1e-8 for u, v, _ in found)
            if not exact_match and not duplicate:
                found.append((complex(z[0]), complex(z[1]), tag or str(R)))
    return sorted(found, key=lambda t: (t[0].real, t[0].imag, t[1].real, t[1].imag))


def isolated_points_2d(X: VectorFieldGerm, *, tol: float | None = None) -> list[SingularPoint2D]:
    """All common zeros of a 2-variable field: exact rational ones first, then certified numeric ones."""
    tol = tol or settings.NUMERIC_CERT_TOL
    if X.dim != 2:
        raise VariableMismatchError("isolated_points_2d needs a 2-variable field")
    f, g = X.components
    if f.is_zero() or g.is_zero():
        other = g if f.is_zero() else f
        if not other.is_zero() and other.is_constant():
            return []
        raise NonIsolatedError(f"field component vanishes identically: zero set contains {other} = 0")
    total = quotient_dimension(_field_ideal(X))
    if total == INFINITE:
        raise NonIsolatedError(f"zero set of ({f}, {g}) is not finite")
    if total == 0:
        return []

    det = _det_jacobian(X)
    out: list[SingularPoint2D] = []
    accounted = 0
    rational = _rational_points(X)
    for x0, y0 in rational:
        p = AffinePoint(X.variables, (x0, y0))
        mu = local_multiplicity(X, p)
        accounted += mu
        out.append(SingularPoint2D(p, mu, det.evaluate(p.as_dict()) != 0))
    logger.debug("%d rational zeros carry multiplicity %d of %s", len(rational), accounted, total)

    if accounted < total:
        numeric = _numeric_points(X, rational, tol)
        for x0, y0, tag in numeric:
            p = AffinePoint(X.variables, (x0, y0), exact=False)
            out.append(SingularPoint2D(p, 1, abs(complex(det.evaluate([x0, y0]))) > tol, tag))
        accounted += len(numeric)
        if accounted != total:
            raise ConvergenceError(
                f"found zeros of total multiplicity {accounted}, quotient dimension is {total}"
            )
    return out


# ----- genericity ---------------------------------------------------------

def homogeneous_point(point: AffinePoint, chart: Chart) -> list[Any]:
    """Homogeneous coordinates of an affine point, chart coordinate = 1."""
    values = point.as_dict()
    a2h = chart.affine_to_homogeneous()
    by_name = {a2h[a]: values[a] for a in chart.affine_variables}
    by_name[chart.chart_variable] = Fraction(1) if point.exact else 1 + 0j
    return [by_name[h] for h in chart.homogeneous_variables]


def _is_zero(value: Any, exact: bool, tol: float) -> bool:
    return value == 0 if exact else abs(complex(value)) <= tol


def _parallel(u: Sequence[Any], v: Sequence[Any], exact: bool, tol: float) -> bool:
    return all(
        _is_zero(u[i] * v[j] - u[j] * v[i], exact, tol)
        for i, j in itertools.combinations(range(len(u)), 2)
    )


def passes_through(W: SingularComponent, P: Sequence[Any], exact: bool = True, tol: float = 1e-9) -> bool:
    """Does component W contain the projective point with homogeneous coordinates P?"""
    if not W.is_parametrized:
        return all(_is_zero(e.evaluate(list(P)), exact, tol) for e in W.homogeneous_equations())
    coords = W.homogeneous_parametrization()
    s = (W.parameter,)
    minors = []
    for i, j in itertools.combinations(range(len(coords)), 2):
        if exact:
            m = coords[i].scale(P[j]) - coords[j].scale(P[i])
            minors.append(m)
        else:
            minors.append((i, j))
    if exact:
        common: list[Fraction] = []
        for m in minors:
            common = univariate_gcd(common, m.univariate_coefficients()[1] if not m.is_zero() else [])
        meets = not common or len(common) > 1
    else:
        meets = False
        # a root of one nonzero minor must annihilate all of them
        polys = []
        for i, j in minors:
            ci = coords[i].univariate_coefficients()[1] if not coords[i].is_zero() else []
            cj = coords[j].univariate_coefficients()[1] if not coords[j].is_zero() else []
            size = max(len(ci), len(cj))
            ci = [complex(c) for c in ci] + [0j] * (size - len(ci))
            cj = [complex(c) for c in cj] + [0j] * (size - len(cj))
            polys.append([a * P[j] - b * P[i] for a, b in zip(ci, cj)])
        pivot = next((p for p in polys if any(abs(c) > tol for c in p[1:])), None)
        if pivot is None:
            meets = all(all(abs(c) <= tol for c in p) for p in polys)
        else:
            while abs(pivot[-1]) <= tol:
                pivot = pivot[:-1]
            for r in np.roots(list(reversed(pivot))):
                if all(abs(sum(c * r**k for k, c in enumerate(p))) <= tol * 10 for p in polys):
                    meets = True
                    break
    if meets:
        return True
    # point at infinity of the parametrized curve
    d = max(c.total_degree() for c in coords)
    at_infinity = [c.coefficient((d,)) for c in coords]
    if exact:
        return _parallel(at_infinity, P, True, tol)
    return _parallel([complex(c) for c in at_infinity], P, False, tol)


def check_genericity(
    Z: SingularComponent,
    slice: DiscSlice,
    components: Sequence[SingularComponent],
    *,
    codim: int = 1,
    tol: float | None = None,
) -> GenericityReport:
    """Certify that the disc meets Z transversally at a smooth point lying on no other component."""
    tol = tol or settings.NUMERIC_CERT_TOL ** 0.5
    center = slice.center
    exact = center.exact
    checks: dict[str, bool] = {}
    details: dict[str, str] = {}
    names = slice.chart.affine_variables
    if slice.chart.homogeneous_variables != Z.chart.homogeneous_variables:
        raise VariableMismatchError("disc and component live in different projective spaces")

    # the disc is written in its own chart; Z may be declared in another one
    P = homogeneous_point(center, slice.chart)

    if Z.is_parametrized:
        same_chart = Z.chart == slice.chart
        on = same_chart and all(
            _is_zero(a - b, exact, tol) for a, b in zip(Z.point_at().coordinates, center.coordinates)
        )
        if not on:
            on = passes_through(Z, P, exact, tol)
        checks["on_component"] = on
        tangent = Z.tangent_at()
        checks["immersive"] = any(t != 0 for t in tangent)
        if not checks["immersive"]:
            details["immersive"] = f"derivative vanishes at {Z.parameter} = {Z.center_parameter}"
        if not same_chart:
            checks["transversal"] = False
            details["transversal"] = "disc must be taken in the component's own chart"
        elif Z.chart.ambient_dim != codim + 2:
            checks["transversal"] = False
            details["transversal"] = "a one-parameter curve has codimension k+1 only when n = k+2"
        else:
            rows = [[Fraction(1) if v == w else Fraction(0) for w in names] for v in slice.free]
            rows.append(list(tangent))
            rank = rational_rank(rows)
            checks["transversal"] = rank == len(names)
            if rank != len(names):
                details["transversal"] = f"rank {rank} < {len(names)}: disc contains the tangent direction"
    else:
        values = center.as_dict()
        eqs = Z.equations or ()
        checks["on_component"] = all(_is_zero(e.evaluate(values), exact, tol) for e in eqs)
        J = jacobian(eqs, names)
        full = J.evaluate(values)
        free_cols = [names.index(v) for v in slice.free]
        restricted = [[row[c] for c in free_cols] for row in full]
        if exact:
            rank_full, rank_free = rational_rank(full), rational_rank(restricted)
        else:
            rank_full = int(np.linalg.matrix_rank(np.array(full, dtype=complex), tol=tol))
            rank_free = int(np.linalg.matrix_rank(np.array(restricted, dtype=complex), tol=tol))
        checks["immersive"] = rank_full == codim + 1
        checks["transversal"] = rank_free == codim + 1
        if not checks["transversal"]:
            details["transversal"] = f"equations restricted to the disc have rank {rank_free}"

    others = [W for W in components if W.name != Z.name]
    hits = [W.name for W in others if passes_through(W, P, exact, tol)]
    checks["disjoint"] = not hits
    if hits:
        details["disjoint"] = f"also on {', '.join(hits)}"

    report = GenericityReport(Z.name, checks, details)
    if not report.passed:
        logger.info("genericity failed for %s: %s", Z.name, report.failed)
    return report
