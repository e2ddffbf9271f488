"""
Command-line entry point.

    baumbott check problems/logarithmic_p3.json
    baumbott residues problems/cerveau_linsneto.json --workers 3
    baumbott bm --field "2*x^2 - x - z, -2*z + 3*x*z" --vars x,z --point 0,0 --radius 0.1 --radius 0.2
    baumbott cenkl-decompose --psi "r1*r2 - r3"
    baumbott cenkl-lift --phi "s1^2" --lam 16/3 --m 4 --n 3

Reports are JSON on stdout (or --out). Exit codes: 0 PASS, 2 mathematical
FAIL, 1 input or resource error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from app.core.config import settings
from app.core.errors import ProblemSchemaError, ResidueToolError
from app.polycore import as_rational, format_rational, parse_poly
from app.residues.cenkl import (
    BundleBase,
    SymPoly,
    decompose,
    lift,
    bundle_rhs,
)
from app.residues.chern import ChernMonomial, CohomologyClass, component_class
from app.residues.foliation import AffinePoint, VectorFieldGerm
from app.residues.martinelli import bm_residue, radius_stability
from app.residues.pipeline import (
    ComponentOutcome,
    Problem,
    load_problem,
    resolve_slice,
    run_check,
    run_residues,
    run_sing,
    run_verify,
    stability_radii,
)
from app.residues.singular import VerificationReport
from app.schemas.problem import ProblemFile
from app.schemas.report import (
    ComponentReport,
    CrossCheck,
    ErrorReport,
    GlobalReport,
    PointReport,
    Provenance,
    Report,
)
from app.utils.logging import configure_logging, log_error

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_FAIL = 2


# ----- report assembly ----------------------------------------------------

def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _scalar(v: Any) -> str:
    if isinstance(v, Fraction):
        return format_rational(v)
    z = complex(v)
    return f"{z.real:.12g}" if abs(z.imag) < 1e-15 else f"{z.real:.12g}{z.imag:+.12g}j"


def _provenance(problem: Problem) -> Provenance:
    o = problem.options
    return Provenance(
        input_hash=problem.source_hash,
        tool_version=settings.TOOL_VERSION,
        budgets={
            "groebner_steps": o.budget,
            "groebner_terms": settings.GROEBNER_TERM_BUDGET,
            "martinelli_tol": o.tol,
            "martinelli_evaluations": settings.MARTINELLI_MAX_EVALUATIONS,
            "crosscheck": o.crosscheck,
        },
    )


def _verification_fields(v: VerificationReport) -> dict[str, Any]:
    return {
        "verification": _status(v.passed),
        "verification_method": v.method,
        "witnesses": [f"{g} -> {str(img)}" for g, img in v.witnesses],
        "degree_consistent": v.degree_consistent,
    }


def _component_report(o: ComponentOutcome) -> ComponentReport:
    Z = o.entry.component
    r = o.residue
    value = r.residue
    crosscheck = None
    if o.crosscheck is not None:
        c = o.crosscheck
        crosscheck = CrossCheck(
            value_real=round(c.value.real, 10), value_imag=round(c.value.imag, 10),
            error_estimate=float(f"{c.error_estimate:.3g}"), radius=c.radius,
            evaluations=c.evaluations, agrees=c.agrees,
        )
    return ComponentReport(
        name=Z.name,
        chart=Z.chart.chart_variable,
        degree=Z.degree,
        **_verification_fields(o.verification),
        genericity=dict(r.genericity.checks) if r.genericity else None,
        point=r.points[0].point.to_strings() if r.points else None,
        field=[str(c) for c in r.field.components],
        residue=format_rational(value.value),
        method=value.description,
        rationalized=value.rationalized,
        error_bound=value.error_bound,
        uses_top_class=value.uses_top_class,
        expected=None if o.entry.expected is None else format_rational(o.entry.expected),
        points=[
            PointReport(
                point=p.point.to_strings(),
                multiplicity=p.multiplicity,
                nondegenerate=p.nondegenerate,
                phi_value=_scalar(p.phi_value),
                det_value=_scalar(p.det_value),
                residue=_scalar(p.residue.value),
                method=p.residue.method,
            )
            for p in r.points
        ],
        crosscheck=crosscheck,
        status=_status(o.passed),
    )


# ----- subcommands --------------------------------------------------------

def _load(args: argparse.Namespace) -> Problem:
    return load_problem(
        args.problem,
        tol=args.tol,
        budget=args.budget,
        crosscheck=False if args.no_crosscheck else None,
        workers=args.workers,
    )


def cmd_sing(args: argparse.Namespace) -> Report:
    problem = _load(args)
    result = run_sing(problem)
    data = {
        "ideals": {chart: [str(g) for g in I.generators] for chart, I in result.ideals.items()},
        "empty": result.empty,
    }
    return Report(subcommand="sing", problem=problem.name, data=data, provenance=_provenance(problem), status="PASS")


def cmd_verify(args: argparse.Namespace) -> Report:
    problem = _load(args)
    reports = run_verify(problem)
    components = [
        ComponentReport(
            name=e.component.name, chart=e.component.chart.chart_variable, degree=e.component.degree,
            **_verification_fields(v), status=_status(v.passed),
        )
        for e, v in zip(problem.components, reports)
    ]
    return Report(
        subcommand="verify", problem=problem.name, components=components,
        provenance=_provenance(problem), status=_status(all(v.passed for v in reports)),
    )


def cmd_residues(args: argparse.Namespace) -> Report:
    problem = _load(args)
    outcomes = run_residues(problem)
    return Report(
        subcommand="residues", problem=problem.name,
        components=[_component_report(o) for o in outcomes],
        provenance=_provenance(problem), status=_status(all(o.passed for o in outcomes)),
    )


def cmd_check(args: argparse.Namespace) -> Report:
    problem = _load(args)
    result = run_check(problem)
    g = result.report
    return Report(
        subcommand="check", problem=problem.name,
        components=[_component_report(o) for o in result.outcomes],
        global_check=GlobalReport(
            phi=str(problem.phi), m=problem.foliation.twist_degree,
            lhs=str(g.lhs), rhs=str(g.rhs), discrepancy=str(g.discrepancy), status=_status(g.passed),
        ),
        provenance=_provenance(problem), status=_status(result.passed),
    )


def _split(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def cmd_bm(args: argparse.Namespace) -> Report:
    tol = args.tol or settings.MARTINELLI_TOL
    if args.problem:
        problem = _load(args)
        rows = []
        ok = True
        for entry in problem.components:
            slice, X = resolve_slice(problem.foliation, entry)
            p = slice.center_in_disc()
            radii = stability_radii(X, p, args.radius or problem.options.radii or None)
            report = radius_stability(X, p, problem.phi, radii, tol)
            ok = ok and report.passed
            rows.append({
                "component": entry.component.name,
                "point": p.to_strings(),
                "values": [_scalar(q.value) for q in report.results],
                "radii": list(report.radii),
                "max_deviation": report.max_deviation,
                "status": _status(report.passed),
            })
        return Report(subcommand="bm", problem=problem.name, data={"components": rows},
                      provenance=_provenance(problem), status=_status(ok))
    if not (args.field and args.vars and args.point):
        raise ProblemSchemaError([("/field", "give a problem file or --field, --vars and --point")])
    variables = tuple(_split(args.vars))
    X = VectorFieldGerm(variables, tuple(parse_poly(c, variables) for c in _split(args.field)))
    p = AffinePoint(variables, tuple(as_rational(c) for c in _split(args.point)))
    phi = ChernMonomial.parse(args.phi, X.dim)
    radii = args.radius or [settings.MARTINELLI_RADIUS]
    if len(radii) == 1:
        q = bm_residue(X, p, phi, radii[0], tol)
        data = {"value": _scalar(q.value), "error_estimate": q.error_estimate,
                "evaluations": q.evaluations, "radii": list(q.radii), "imaginary_ok": q.imaginary_ok}
        return Report(subcommand="bm", data=data, status=_status(q.imaginary_ok))
    report = radius_stability(X, p, phi, radii, tol)
    data = {"values": [_scalar(q.value) for q in report.results], "radii": list(report.radii),
            "max_deviation": report.max_deviation}
    return Report(subcommand="bm", data=data, status=_status(report.passed))


def cmd_cenkl_decompose(args: argparse.Namespace) -> Report:
    d = decompose(SymPoly.parse(args.psi, "rho"), args.weight)
    return Report(subcommand="cenkl-decompose", data={"psi": str(d.psi), **d.as_strings()}, status="PASS")


def cmd_cenkl_lift(args: argparse.Namespace) -> Report:
    phi = SymPoly.parse(args.phi, "sigma")
    psi = lift(phi, args.weight)
    d = decompose(psi)
    data: dict[str, Any] = {"phi": str(phi), "psi": str(psi), "decomposition": d.as_strings()}
    if args.lam is not None:
        if args.m is None or args.n is None:
            raise ProblemSchemaError([("/m", "--lam needs --m and --n")])
        base = BundleBase(args.n, args.m, args.codim)
        Z: CohomologyClass | None = None
        if args.degree is not None:
            Z = component_class(args.degree, args.n, args.codim)
        rhs = bundle_rhs(as_rational(args.lam), base, d, Z)
        data["rhs"] = str(rhs)
        data["rhs_degrees"] = sorted(rhs.degrees())
    return Report(subcommand="cenkl-lift", data=data, status="PASS")


def cmd_schema(args: argparse.Namespace) -> dict[str, Any]:
    return {"problem": ProblemFile.model_json_schema(), "report": Report.model_json_schema(by_alias=True)}


# ----- argument parsing ---------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="Write the report here instead of stdout")
    common.add_argument("--tol", type=float, default=None, help="Sphere-integral tolerance")
    common.add_argument("--budget", type=int, default=None, help="Groebner S-pair reduction budget")
    common.add_argument("--no-crosscheck", action="store_true", help="Skip the sphere-integral cross-check")
    common.add_argument("--workers", type=int, default=None, help="Parallel component residues")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING ...")
    common.add_argument("--log-dir", default=None, help="Also log to a dated file in this directory")

    p = argparse.ArgumentParser(prog="baumbott", description=settings.DESCRIPTION)
    p.add_argument("--version", action="version", version=f"%(prog)s {settings.TOOL_VERSION}")
    sub = p.add_subparsers(dest="command", required=True)

    for name, handler, text in (
        ("sing", cmd_sing, "Singular ideal of the foliation in each chart"),
        ("verify", cmd_verify, "Check declared components lie in the singular set"),
        ("residues", cmd_residues, "Residue of every declared component"),
        ("check", cmd_check, "Residues plus the global residue theorem"),
    ):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("problem", help="Problem file (JSON)")
        s.set_defaults(handler=handler)

    s = sub.add_parser("bm", parents=[common], help="Residues from the sphere integral")
    s.add_argument("problem", nargs="?", help="Problem file; cross-checks every component")
    s.add_argument("--field", help="Comma-separated components of a 2-variable field")
    s.add_argument("--vars", help="Comma-separated variable names")
    s.add_argument("--point", help="Comma-separated rational coordinates of the zero")
    s.add_argument("--phi", default="c1^2", help="Chern monomial (default c1^2)")
    s.add_argument("--radius", type=float, action="append", help="Sphere radius; repeat for a stability run")
    s.set_defaults(handler=cmd_bm)

    s = sub.add_parser("cenkl-decompose", parents=[common], help="Split psi(rho) into phi, phi0, phi_j")
    s.add_argument("--psi", required=True, help='e.g. "r1*r2 - r3"')
    s.add_argument("--weight", type=int, default=None, help="Expected weight of psi")
    s.set_defaults(handler=cmd_cenkl_decompose)

    s = sub.add_parser("cenkl-lift", parents=[common], help="A psi whose y-coefficient is phi")
    s.add_argument("--phi", required=True, help='e.g. "s1^2"')
    s.add_argument("--weight", type=int, default=None, help="Weight of phi")
    s.add_argument("--lam", default=None, help="Residue; with --m and --n also evaluates the bundle class")
    s.add_argument("--m", type=int, default=None, help="Degree of det(N_F)")
    s.add_argument("--n", type=int, default=None, help="Ambient dimension")
    s.add_argument("--codim", type=int, default=1)
    s.add_argument("--degree", type=int, default=None, help="Degree of the component (default 1)")
    s.set_defaults(handler=cmd_cenkl_lift)

    s = sub.add_parser("schema", parents=[common], help="Print the problem and report JSON schemas")
    s.set_defaults(handler=cmd_schema)
    return p


def _emit(payload: Any, out: str | None) -> None:
    if hasattr(payload, "model_dump"):
        payload = payload.model_dump(mode="json", by_alias=True, exclude_none=True)
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _error_report(exc: Exception) -> ErrorReport:
    details = []
    if isinstance(exc, ProblemSchemaError):
        details = [{"pointer": ptr, "message": msg} for ptr, msg in exc.errors]
    stage = getattr(exc, "stage", "input")
    return ErrorReport(stage=stage, error=type(exc).__name__, message=str(exc), details=details)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level or settings.LOG_LEVEL, args.log_dir or settings.LOG_DIR)
    try:
        payload = args.handler(args)
    except (ResidueToolError, OSError, ValueError) as exc:
        log_error(exc, f"{args.command} failed")
        _emit(_error_report(exc), args.out)
        return EXIT_ERROR
    _emit(payload, args.out)
    if isinstance(payload, Report) and payload.status == "FAIL":
        return EXIT_FAIL
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
