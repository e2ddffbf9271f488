"""
End-to-end residue pipeline for one problem file.

    load_problem(path)       -> Problem
    run_sing(problem)        -> singular ideal per chart, emptiness
    run_verify(problem)      -> VerificationReport per component
    run_residues(problem)    -> ComponentOutcome per component (parallel, ordered)
    run_check(problem)       -> CheckResult: outcomes + global residue theorem

Every stage returns data; nothing here prints. The CLI turns results into
reports and exit codes.
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import ComponentMissedError, NearbyZeroError, ProblemSchemaError
from app.polycore import Ideal, MultiPoly, as_rational, parse_poly
from app.residues.chern import ChernMonomial, GlobalCheckReport, component_class, global_check
from app.residues.foliation import (
    AffinePoint,
    Chart,
    DiscSlice,
    FoliationSpec,
    OneForm,
    VectorFieldGerm,
    dehomogenize,
    dual_vector_field_2d,
    restrict_to_disc,
)
from app.residues.martinelli import QuadratureResult, bm_residue
from app.residues.residue import ComponentResidue, component_cluster, residue_for_component
from app.residues.singular import (
    SingularComponent,
    VerificationReport,
    homogeneous_point,
    isolated_points_2d,
    singular_ideal,
    singular_set_is_empty,
    verify_component,
)
from app.schemas.problem import ComponentSpec, ProblemFile

logger = logging.getLogger(__name__)


# ----- problem model ------------------------------------------------------

@dataclass(frozen=True)
class RunOptions:
    tol: float = field(default_factory=lambda: settings.MARTINELLI_TOL)
    budget: int = field(default_factory=lambda: settings.GROEBNER_STEP_BUDGET)
    crosscheck: bool = field(default_factory=lambda: settings.CROSSCHECK_ENABLED)
    workers: int = field(default_factory=lambda: settings.RESIDUE_WORKERS)
    radii: tuple[float, ...] = ()

    def merged(self, **overrides: Any) -> "RunOptions":
        values = {k: v for k, v in overrides.items() if v is not None}
        return RunOptions(**{**self.__dict__, **values})


@dataclass(frozen=True)
class DiscRequest:
    chart: Chart
    fixed: dict[str, Fraction]
    free: tuple[str, ...]


@dataclass(frozen=True)
class ComponentEntry:
    component: SingularComponent
    disc: DiscRequest
    expected: Fraction | None = None


@dataclass(frozen=True)
class Problem:
    foliation: FoliationSpec
    components: tuple[ComponentEntry, ...]
    phi: ChernMonomial
    options: RunOptions
    name: str | None = None
    source_hash: str = ""

    def chart(self, variable: str, affine: Sequence[str] | None = None) -> Chart:
        return Chart.of(self.foliation.homogeneous_form.variables, variable, affine)


def _pointer(loc: Sequence[Any]) -> str:
    return "/" + "/".join(str(p) for p in loc) if loc else ""


def load_problem(path: str | Path, **overrides: Any) -> Problem:
    """Read, validate and build a problem file; schema faults carry JSON pointers."""
    raw = Path(path).read_bytes()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ProblemSchemaError([("", f"not valid JSON: {exc.msg} (line {exc.lineno})")]) from exc
    try:
        pf = ProblemFile.model_validate(data)
    except ValidationError as exc:
        raise ProblemSchemaError([(_pointer(e["loc"]), e["msg"]) for e in exc.errors()]) from exc
    return build_problem(pf, source_hash=hashlib.sha256(raw).hexdigest(), **overrides)


def _form(pf: ProblemFile) -> FoliationSpec:
    hv = pf.form.variables
    if pf.form.homogeneous is not None:
        coeffs = tuple(parse_poly(c, hv) for c in pf.form.homogeneous)
        return FoliationSpec.from_homogeneous(OneForm(tuple(hv), coeffs), pf.codim)
    spec = pf.form.affine
    chart = Chart.of(hv, spec.chart, spec.variables)
    coeffs = tuple(parse_poly(c, chart.affine_variables) for c in spec.coefficients)
    return FoliationSpec.from_affine(OneForm(chart.affine_variables, coeffs), chart, pf.codim)


def _affine_equation(e: MultiPoly, chart: Chart) -> MultiPoly:
    mapping: dict[str, Any] = {chart.chart_variable: 1}
    target = chart.affine_variables
    mapping.update({h: MultiPoly.var(a, target) for h, a in chart.homogeneous_to_affine().items()})
    return e.substitute(mapping, target)


def _component(spec: ComponentSpec, hv: Sequence[str]) -> SingularComponent:
    chart = Chart.of(hv, spec.chart, spec.variables)
    common = dict(degree=spec.degree, parameter=spec.parameter, center_parameter=as_rational(spec.disc.center_parameter))
    if spec.homogeneous_parametrization is not None:
        coords = [parse_poly(c, (spec.parameter,)) for c in spec.homogeneous_parametrization]
        return SingularComponent.from_homogeneous_parametrization(spec.name, chart, coords, **common)
    if spec.parametrization is not None:
        params = tuple(parse_poly(c, (spec.parameter,)) for c in spec.parametrization)
        return SingularComponent(spec.name, chart, parametrization=params, **common)
    eqs = tuple(_affine_equation(parse_poly(e, hv), chart) for e in spec.equations or ())
    return SingularComponent(spec.name, chart, equations=eqs, **common)


def build_problem(pf: ProblemFile, *, source_hash: str = "", **overrides: Any) -> Problem:
    F = _form(pf)
    hv = F.homogeneous_form.variables
    entries = []
    for spec in pf.components:
        Z = _component(spec, hv)
        chart = Z.chart if spec.disc.chart in (None, spec.chart) else Chart.of(hv, spec.disc.chart)
        disc = DiscRequest(chart, {k: as_rational(v) for k, v in spec.disc.fixed.items()}, tuple(spec.disc.free))
        expected = None if spec.expected_residue is None else as_rational(spec.expected_residue)
        entries.append(ComponentEntry(Z, disc, expected))
    if isinstance(pf.phi, str):
        phi = ChernMonomial.parse(pf.phi, pf.codim + 1)
    else:
        phi = ChernMonomial(tuple(pf.phi))
    o = pf.options
    options = RunOptions().merged(
        tol=o.martinelli_tol, budget=o.groebner_budget, crosscheck=o.crosscheck,
        workers=o.workers, radii=tuple(o.radii) if o.radii else None,
    ).merged(**overrides)
    logger.info("problem %s: P^%d, codim %d, m = %d, %d components",
                pf.name or "?", F.ambient_dim, F.codim, F.twist_degree, len(entries))
    return Problem(F, tuple(entries), phi, options, pf.name, source_hash)


# ----- discs --------------------------------------------------------------

def _point_in_chart(point: AffinePoint, source: Chart, target: Chart) -> AffinePoint:
    P = homogeneous_point(point, source)
    pivot = P[target.chart_id]
    if pivot == 0:
        raise ComponentMissedError(f"point {point} lies outside the chart {target}")
    coords = tuple(c / pivot for i, c in enumerate(P) if i != target.chart_id)
    return AffinePoint(target.affine_variables, coords, point.exact, target)


def resolve_slice(F: FoliationSpec, entry: ComponentEntry) -> tuple[DiscSlice, VectorFieldGerm]:
    """The disc with its centre on Z, and the restricted dual field."""
    Z, disc = entry.component, entry.disc
    chart = disc.chart
    fixed_point = AffinePoint(
        chart.affine_variables,
        tuple(disc.fixed.get(v, 0) for v in chart.affine_variables),
    )
    provisional = DiscSlice(chart, disc.fixed, disc.free, fixed_point)
    X = dual_vector_field_2d(restrict_to_disc(dehomogenize(F, chart), provisional))
    if Z.is_parametrized:
        center = _point_in_chart(Z.point_at(), Z.chart, chart)
        values = center.as_dict()
        off = [v for v, c in disc.fixed.items() if values[v] != c]
        if off:
            raise ComponentMissedError(
                f"disc {dict(disc.fixed)} misses {Z.name} at {Z.parameter} = {Z.center_parameter} ({center})"
            )
    else:
        cluster = component_cluster(Z, X, provisional)
        if not cluster:
            raise ComponentMissedError(f"disc {dict(disc.fixed)} meets no zero of the field on {Z.name}")
        p = cluster[0]
        coords = dict(disc.fixed)
        coords.update(p.as_dict())
        center = AffinePoint(
            chart.affine_variables, tuple(coords[v] for v in chart.affine_variables), p.exact, chart
        )
    return DiscSlice(chart, disc.fixed, disc.free, center), X


# ----- stages -------------------------------------------------------------

@dataclass(frozen=True)
class SingResult:
    ideals: dict[str, Ideal]
    empty: bool


def run_sing(problem: Problem) -> SingResult:
    """Singular ideal in every chart a component is declared in (all charts if none)."""
    F = problem.foliation
    names = [e.component.chart.chart_variable for e in problem.components]
    names = list(dict.fromkeys(names)) or list(F.homogeneous_form.variables)
    ideals = {v: singular_ideal(dehomogenize(F, problem.chart(v))) for v in names}
    empty = all(singular_set_is_empty(I) for I in ideals.values())
    return SingResult(ideals, empty)


def run_verify(problem: Problem) -> list[VerificationReport]:
    F = problem.foliation
    reports = []
    for entry in problem.components:
        Z = entry.component
        I = singular_ideal(dehomogenize(F, Z.chart))
        reports.append(verify_component(Z, I))
    return reports


@dataclass(frozen=True)
class CrossCheck:
    value: complex
    error_estimate: float
    radius: float
    agrees: bool
    evaluations: int


@dataclass(frozen=True)
class ComponentOutcome:
    entry: ComponentEntry
    verification: VerificationReport
    residue: ComponentResidue
    crosscheck: CrossCheck | None = None

    @property
    def name(self) -> str:
        return self.entry.component.name

    @property
    def value(self) -> Fraction:
        return self.residue.residue.value

    @property
    def matches_expected(self) -> bool | None:
        return None if self.entry.expected is None else self.entry.expected == self.value

    @property
    def passed(self) -> bool:
        return (
            self.verification.passed
            and self.matches_expected is not False
            and (self.crosscheck is None or self.crosscheck.agrees)
        )


def crosscheck_radius(X: VectorFieldGerm, p: AffinePoint, preferred: float | None = None) -> float:
    """The preferred radius, shrunk to stay clear of the other zeros of X."""
    r = preferred or settings.MARTINELLI_RADIUS
    here = [complex(c) for c in p.project(X.variables).coordinates]
    gaps = []
    for sp in isolated_points_2d(X):
        q = [complex(c) for c in sp.point.coordinates]
        d = sum(abs(a - b) ** 2 for a, b in zip(q, here)) ** 0.5
        if d > settings.MARTINELLI_MARGIN:
            gaps.append(d)
    if gaps and r >= 0.5 * min(gaps):
        r = 0.4 * min(gaps)
    return r


def stability_radii(X: VectorFieldGerm, p: AffinePoint, radii: Sequence[float] | None = None) -> list[float]:
    """Radii for a radius-stability run at p, each kept clear of the other zeros of X.

    Radii that collapse onto the same cap are merged; when only one is left,
    half of it is added.
    """
    requested = list(radii or settings.RADIUS_LADDER)
    capped: list[float] = []
    for r in requested:
        c = crosscheck_radius(X, p, r)
        if c not in capped:
            capped.append(c)
    if len(capped) == 1 and len(requested) > 1:
        capped.insert(0, capped[0] / 2)
    return capped


def _crosscheck(problem: Problem, result: ComponentResidue) -> CrossCheck:
    X, tol = result.field, problem.options.tol
    preferred = problem.options.radii[0] if problem.options.radii else None
    values, errors, evaluations, radius = [], [], 0, preferred or settings.MARTINELLI_RADIUS
    for pr in result.points:
        radius = crosscheck_radius(X, pr.point, preferred)
        q: QuadratureResult = bm_residue(X, pr.point, problem.phi, radius, tol)
        values.append(q.value)
        errors.append(q.error_estimate)
        evaluations += q.evaluations
    mean = sum(values) / len(values)
    bound = max(errors)
    # single points of a conjugate cluster may be complex, the mean may not
    agrees = abs(mean.imag) <= tol and abs(mean - complex(result.residue.value)) <= max(tol, bound)
    if not agrees:
        logger.warning("component %s: sphere integral %s disagrees with %s", result.component, mean, result.residue.value)
    return CrossCheck(mean, bound, radius, agrees, evaluations)


def component_outcome(problem: Problem, entry: ComponentEntry) -> ComponentOutcome:
    F = problem.foliation
    Z = entry.component
    verification = verify_component(Z, singular_ideal(dehomogenize(F, Z.chart)))
    slice, _ = resolve_slice(F, entry)
    components = [e.component for e in problem.components]
    result = residue_for_component(
        F, Z, problem.phi, slice, components=components, step_budget=problem.options.budget
    )
    check = None
    if problem.options.crosscheck:
        try:
            check = _crosscheck(problem, result)
        except NearbyZeroError as exc:
            logger.warning("component %s: cross-check skipped, %s", Z.name, exc)
    return ComponentOutcome(entry, verification, result, check)


def run_residues(problem: Problem) -> list[ComponentOutcome]:
    """Per-component residues; report order is declaration order whatever the worker count."""
    workers = max(1, problem.options.workers)
    entries = list(problem.components)
    if workers == 1 or len(entries) < 2:
        return [component_outcome(problem, e) for e in entries]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda e: component_outcome(problem, e), entries))


@dataclass
class CheckResult:
    outcomes: list[ComponentOutcome]
    report: GlobalCheckReport
    elapsed_ms: int = 0
    trace: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.report.passed and all(o.passed for o in self.outcomes)


def run_check(problem: Problem) -> CheckResult:
    t0 = time.time()
    outcomes = run_residues(problem)
    F = problem.foliation
    terms = [
        (o.name, o.value, component_class(o.entry.component.degree, F.ambient_dim, F.codim))
        for o in outcomes
    ]
    report = global_check(F, problem.phi, terms)
    trace = {
        "components": len(outcomes),
        "methods": {o.name: o.residue.residue.method for o in outcomes},
        "crosscheck": problem.options.crosscheck,
    }
    return CheckResult(outcomes, report, int((time.time() - t0) * 1000), trace)
