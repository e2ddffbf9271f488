"""
Foliations on P^n as polynomial 1-form data.

A codimension-one foliation is presented by a twisted 1-form: n+1 homogeneous
coefficients (of dX_0, ..., dX_n) of a common degree e with vanishing Euler
contraction sum_i X_i * coeff_i. In an affine chart {X_c = 1} it becomes an
ordinary polynomial 1-form; restricted to a coordinate-parallel 2-disc it
becomes A dx + B dy, whose dual vector field X = B d/dx - A d/dy spans its
kernel. det(N_F) = O(e + 1), so c_1(det N_F) = (e + 1) h.

Sign convention for the dual field is (A, B) -> (B, -A); any global sign is
invisible to weighted-degree-2 Chern monomials.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from app.core.errors import (
    DegenerateFieldError,
    DegreeMismatchError,
    NotProjectiveFormError,
    NotTransversalError,
    UnknownVariableError,
    VariableMismatchError,
)
from app.polycore import MultiPoly, as_rational, format_rational
from app.residues.chern import CohomologyClass

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Chart:
    """Affine chart {X_c = 1} of P^n with named affine coordinates."""

    homogeneous_variables: tuple[str, ...]
    chart_variable: str
    affine_variables: tuple[str, ...]

    def __post_init__(self) -> None:
        n = len(self.homogeneous_variables) - 1
        if n < 2:
            raise ValueError("ambient projective space must have dimension >= 2")
        if self.chart_variable not in self.homogeneous_variables:
            raise UnknownVariableError(self.chart_variable, self.homogeneous_variables)
        if len(self.affine_variables) != n or len(set(self.affine_variables)) != n:
            raise ValueError(f"chart needs {n} distinct affine variable names")

    @classmethod
    def of(
        cls,
        homogeneous_variables: Sequence[str],
        chart_variable: str,
        affine_variables: Sequence[str] | None = None,
    ) -> "Chart":
        hv = tuple(homogeneous_variables)
        if affine_variables is None:
            affine_variables = [v.lower() for v in hv if v != chart_variable]
        return cls(hv, chart_variable, tuple(affine_variables))

    @property
    def ambient_dim(self) -> int:
        return len(self.homogeneous_variables) - 1

    @property
    def chart_id(self) -> int:
        return self.homogeneous_variables.index(self.chart_variable)

    def affine_to_homogeneous(self) -> dict[str, str]:
        """Affine name -> homogeneous name for the non-chart coordinates."""
        others = [v for v in self.homogeneous_variables if v != self.chart_variable]
        return dict(zip(self.affine_variables, others))

    def homogeneous_to_affine(self) -> dict[str, str]:
        return {h: a for a, h in self.affine_to_homogeneous().items()}

    def __str__(self) -> str:
        return f"{{{self.chart_variable} = 1}}"


@dataclass(frozen=True)
class OneForm:
    """sum_i coefficients[i] d(variables[i]) with polynomial coefficients."""

    variables: tuple[str, ...]
    coefficients: tuple[MultiPoly, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        coeffs = tuple(
            c if c.variables == self.variables else c.reorder(self.variables)
            for c in self.coefficients
        )
        object.__setattr__(self, "coefficients", coeffs)
        if len(coeffs) != len(self.variables):
            raise VariableMismatchError(
                f"{len(coeffs)} coefficients for {len(self.variables)} differentials"
            )

    def coefficient(self, name: str) -> MultiPoly:
        return self.coefficients[self.variables.index(name)]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def scale(self, c: Any) -> "OneForm":
        return OneForm(self.variables, tuple(p.scale(c) for p in self.coefficients))

    def euler_contraction(self) -> MultiPoly:
        """sum_i x_i * coeff_i."""
        total = MultiPoly.zero(self.variables)
        for v, c in zip(self.variables, self.coefficients):
            total = total + MultiPoly.var(v, self.variables) * c
        return total

    def __str__(self) -> str:
        parts = [f"({c}) d{v}" for v, c in zip(self.variables, self.coefficients) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class AffinePoint:
    """A point in named affine coordinates; exact (Fractions) or numeric (complex)."""

    variables: tuple[str, ...]
    coordinates: tuple[Any, ...]
    exact: bool = True
    chart: Chart | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        coords = tuple(as_rational(c) if self.exact else complex(c) for c in self.coordinates)
        object.__setattr__(self, "coordinates", coords)
        if len(coords) != len(self.variables):
            raise VariableMismatchError("coordinate count does not match variables")
        if self.chart is not None and len(coords) != self.chart.ambient_dim:
            raise VariableMismatchError("coordinate count does not match chart dimension")

    def as_dict(self) -> dict[str, Any]:
        return dict(zip(self.variables, self.coordinates))

    def project(self, names: Sequence[str]) -> "AffinePoint":
        d = self.as_dict()
        return AffinePoint(tuple(names), tuple(d[n] for n in names), self.exact)

    def to_strings(self) -> list[str]:
        if self.exact:
            return [format_rational(c) for c in self.coordinates]
        return [f"{c.real:.12g}{c.imag:+.12g}j" for c in self.coordinates]

    def __str__(self) -> str:
        return "(" + ", ".join(self.to_strings()) + ")"


@dataclass(frozen=True)
class VectorFieldGerm:
    """X = sum_i components[i] d/d(variables[i])."""

    variables: tuple[str, ...]
    components: tuple[MultiPoly, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        comps = tuple(
            c if c.variables == self.variables else c.reorder(self.variables)
            for c in self.components
        )
        object.__setattr__(self, "components", comps)
        if len(comps) != len(self.variables):
            raise VariableMismatchError("one component per variable required")

    @property
    def dim(self) -> int:
        return len(self.variables)

    def scale(self, c: Any) -> "VectorFieldGerm":
        return VectorFieldGerm(self.variables, tuple(p.scale(c) for p in self.components))

    def translate(self, point: AffinePoint) -> "VectorFieldGerm":
        """The field in coordinates centred at `point` (exact points only)."""
        shift = point.project(self.variables).as_dict()
        return VectorFieldGerm(self.variables, tuple(p.translate(shift) for p in self.components))

    def swap(self) -> "VectorFieldGerm":
        """Exchange the two coordinates (2-variable fields)."""
        a, b = self.variables
        mapping = {a: MultiPoly.var(b, self.variables), b: MultiPoly.var(a, self.variables)}
        comps = [p.substitute(mapping, self.variables) for p in self.components]
        return VectorFieldGerm(self.variables, (comps[1], comps[0]))

    def __str__(self) -> str:
        return ", ".join(str(c) for c in self.components)


@dataclass(frozen=True)
class FoliationSpec:
    """Codimension-k foliation on P^n given by a homogeneous twisted 1-form."""

    ambient_dim: int
    codim: int
    homogeneous_form: OneForm
    twist_degree: int
    declared_chart: Chart | None = field(default=None, compare=False)

    @classmethod
    def from_homogeneous(cls, form: OneForm, codim: int = 1) -> "FoliationSpec":
        n = len(form.variables) - 1
        check_euler(form)
        m = coefficient_degree(form) + 1
        return cls(n, codim, form, m)

    @classmethod
    def from_affine(cls, form: OneForm, chart: Chart, codim: int = 1) -> "FoliationSpec":
        homogeneous = homogenize(form, chart)
        spec = cls.from_homogeneous(homogeneous, codim)
        return cls(spec.ambient_dim, codim, homogeneous, spec.twist_degree, chart)


@dataclass(frozen=True)
class DiscSlice:
    """Coordinate-parallel (k+1)-disc in a chart: some variables fixed, the rest free."""

    chart: Chart
    fixed: Mapping[str, Fraction]
    free: tuple[str, ...]
    center: AffinePoint

    def __post_init__(self) -> None:
        fixed = {k: as_rational(v) for k, v in dict(self.fixed).items()}
        object.__setattr__(self, "fixed", fixed)
        object.__setattr__(self, "free", tuple(self.free))
        names = set(fixed) | set(self.free)
        if names != set(self.chart.affine_variables) or set(fixed) & set(self.free):
            raise ValueError("fixed and free variables must partition the chart variables")

    @property
    def dim(self) -> int:
        return len(self.free)

    def center_in_disc(self) -> AffinePoint:
        return self.center.project(self.free)


@dataclass(frozen=True)
class NormalDegree:
    """Degree m of det(N_F) and the classes c_1 = m h, c_1^{k+1} = m^{k+1} h^{k+1}."""

    m: int
    c1: CohomologyClass
    c1_top: CohomologyClass


# ----- operations ---------------------------------------------------------

def contract(form: OneForm, X: VectorFieldGerm) -> MultiPoly:
    """i_X(form) = sum_i X_i * form_i."""
    if form.variables != X.variables:
        raise VariableMismatchError("form and field over different variables")
    total = MultiPoly.zero(form.variables)
    for a, b in zip(form.coefficients, X.components):
        total = total + a * b
    return total


def check_euler(form: OneForm) -> None:
    residue = form.euler_contraction()
    if not residue.is_zero():
        raise NotProjectiveFormError(f"Euler contraction does not vanish: {residue}")


def coefficient_degree(form: OneForm) -> int:
    """Common degree e of the nonzero homogeneous coefficients."""
    degrees = set()
    for c in form.coefficients:
        if c.is_zero():
            continue
        if not c.is_homogeneous():
            raise DegreeMismatchError(f"coefficient {c} is not homogeneous")
        degrees.add(c.total_degree())
    if len(degrees) != 1:
        raise DegreeMismatchError(f"coefficients have degrees {sorted(degrees)}")
    return degrees.pop()


def dehomogenize(F: FoliationSpec, chart: Chart) -> OneForm:
    """Set the chart coordinate to 1 and drop its differential."""
    form = F.homogeneous_form
    if chart.homogeneous_variables != form.variables:
        raise VariableMismatchError("chart does not belong to this projective space")
    check_euler(form)
    rename = chart.homogeneous_to_affine()
    target = chart.affine_variables
    mapping: dict[str, Any] = {chart.chart_variable: 1}
    mapping.update({h: MultiPoly.var(a, target) for h, a in rename.items()})
    coeffs = tuple(
        form.coefficient(h).substitute(mapping, target)
        for h in form.variables
        if h != chart.chart_variable
    )
    # `coeffs` follows homogeneous order minus the chart variable, which is
    # exactly the affine variable order.
    return OneForm(target, coeffs)


def homogenize(form: OneForm, chart: Chart) -> OneForm:
    """Inverse of `dehomogenize`: the homogeneous twisted form with the least
    power of the chart coordinate."""
    if form.variables != chart.affine_variables:
        raise VariableMismatchError("form is not written in this chart's variables")
    hv = chart.homogeneous_variables
    c_index = chart.chart_id
    a2h = chart.affine_to_homogeneous()
    d = max((c.total_degree() for c in form.coefficients), default=-1)
    if d < 0:
        raise NotTransversalError("cannot homogenize the zero form")

    def lift(p: MultiPoly, degree: int) -> MultiPoly:
        terms = {}
        for exp, coef in p.terms.items():
            h = [0] * len(hv)
            for name, k in zip(p.variables, exp):
                h[hv.index(a2h[name])] = k
            h[c_index] = degree - sum(exp)
            terms[tuple(h)] = coef
        return MultiPoly(hv, terms)

    Xc = MultiPoly.var(chart.chart_variable, hv)
    lifted = {a2h[v]: lift(c, d) for v, c in zip(form.variables, form.coefficients)}
    euler = MultiPoly.zero(hv)
    for h, A in lifted.items():
        euler = euler + MultiPoly.var(h, hv) * A
    coeffs = []
    for h in hv:
        coeffs.append(-euler if h == chart.chart_variable else lifted[h] * Xc)
    # strip the common power of the chart coordinate
    common = min(
        (e[c_index] for c in coeffs for e in c.terms),
        default=0,
    )
    if common:
        coeffs = [
            MultiPoly(hv, {e[:c_index] + (e[c_index] - common,) + e[c_index + 1:]: v for e, v in c.terms.items()})
            for c in coeffs
        ]
    return OneForm(hv, tuple(coeffs))


def restrict_to_disc(form: OneForm, slice: DiscSlice) -> OneForm:
    """Pull the affine form back to the disc: fix values, keep free differentials."""
    if form.variables != slice.chart.affine_variables:
        raise VariableMismatchError("form and disc live in different charts")
    target = slice.free
    mapping: dict[str, Any] = dict(slice.fixed)
    mapping.update({v: MultiPoly.var(v, target) for v in target})
    coeffs = tuple(form.coefficient(v).substitute(mapping, target) for v in target)
    restricted = OneForm(target, coeffs)
    if restricted.is_zero():
        raise NotTransversalError(f"form vanishes identically on the disc {dict(slice.fixed)}")
    logger.debug("restricted form on %s: %s", target, restricted)
    return restricted


def dual_vector_field_2d(form: OneForm) -> VectorFieldGerm:
    """A dx + B dy  ->  X = B d/dx - A d/dy."""
    if len(form.variables) != 2:
        raise VariableMismatchError("dual field needs exactly two free variables")
    A, B = form.coefficients
    if A.is_zero() and B.is_zero():
        raise DegenerateFieldError("both coefficients vanish identically")
    return VectorFieldGerm(form.variables, (B, -A))


def det_normal_degree(F: FoliationSpec) -> NormalDegree:
    """m = e + 1 for a 1-form with coefficients of degree e; c_1(det N_F) = m h."""
    m = coefficient_degree(F.homogeneous_form) + 1
    c1 = CohomologyClass.hyperplane(F.ambient_dim).scale(m)
    return NormalDegree(m, c1, c1 ** (F.codim + 1))
