"""
End-to-end pipeline tests over the problem files in problems/.

Cross-checks are switched off except in the slow section; the exact
residues and the global theorem are what these tests pin.
"""

import json
from fractions import Fraction

import pytest

from app.core.errors import ProblemSchemaError
from app.residues.martinelli import QuadratureResult
from app.residues.pipeline import (
    RunOptions,
    component_outcome,
    crosscheck_radius,
    load_problem,
    run_check,
    run_residues,
    run_sing,
    run_verify,
    stability_radii,
)
from tests.helpers import make_field, make_point


def _write(tmp_path, data, name="problem.json"):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return path


def _edited(source, tmp_path, edit):
    data = json.loads(source.read_text())
    edit(data)
    return _write(tmp_path, data)


# ---- loading ---------------------------------------------------------------

def test_load_twisted_cubic_problem(twisted_cubic_path):
    problem = load_problem(twisted_cubic_path, crosscheck=False)
    assert problem.foliation.twist_degree == 4
    assert [e.component.name for e in problem.components] == ["Gamma", "Q", "L"]
    assert problem.components[0].expected == Fraction(25, 6)
    assert problem.phi.exponents == (2,)
    assert not problem.options.crosscheck
    assert len(problem.source_hash) == 64


def test_load_homogeneous_form(logarithmic_path):
    problem = load_problem(logarithmic_path, crosscheck=False)
    assert problem.foliation.ambient_dim == 3
    assert problem.components[3].component.chart.chart_variable == "Y"


def test_invalid_json_is_a_schema_error(tmp_path):
    with pytest.raises(ProblemSchemaError) as exc:
        load_problem(_write(tmp_path, "{not json"))
    assert exc.value.errors[0][0] == ""
    assert exc.value.stage == "input"


def test_unknown_field_reports_a_pointer(twisted_cubic_path, tmp_path):
    path = _edited(twisted_cubic_path, tmp_path, lambda d: d["components"][0].update(colour="red"))
    with pytest.raises(ProblemSchemaError) as exc:
        load_problem(path)
    assert "/components/0/colour" in [ptr for ptr, _ in exc.value.errors]


def test_wrong_variable_count_is_rejected(twisted_cubic_path, tmp_path):
    path = _edited(twisted_cubic_path, tmp_path, lambda d: d.update(ambient_dim=4))
    with pytest.raises(ProblemSchemaError):
        load_problem(path)


def test_run_options_merge_skips_unset_values():
    base = RunOptions(tol=1e-3, budget=100, crosscheck=False, workers=1)
    merged = base.merged(tol=None, workers=4)
    assert merged.tol == 1e-3
    assert merged.workers == 4
    assert base.workers == 1


# ---- stages ----------------------------------------------------------------

def test_sing_stage(logarithmic_path):
    result = run_sing(load_problem(logarithmic_path, crosscheck=False))
    assert set(result.ideals) == {"T", "Y", "X"}
    assert not result.empty


def test_verify_stage(twisted_cubic_path):
    reports = run_verify(load_problem(twisted_cubic_path, crosscheck=False))
    assert [r.passed for r in reports] == [True, True, True]


def test_logarithmic_residues(logarithmic_path):
    outcomes = run_residues(load_problem(logarithmic_path, crosscheck=False))
    assert [o.value for o in outcomes] == [0, 0, 0] + [Fraction(16, 3)] * 3
    assert all(o.matches_expected for o in outcomes)


def test_parallel_workers_keep_declaration_order(twisted_cubic_path):
    problem = load_problem(twisted_cubic_path, crosscheck=False, workers=3)
    outcomes = run_residues(problem)
    assert [o.name for o in outcomes] == ["Gamma", "Q", "L"]
    assert [o.value for o in outcomes] == [Fraction(25, 6), Fraction(-1, 2), Fraction(9, 2)]


# ---- rescaling -------------------------------------------------------------

def _scaled_form(data, c):
    form = data["form"]
    if "homogeneous" in form:
        form["homogeneous"] = [f"{c}*({e})" for e in form["homogeneous"]]
    else:
        coeffs = form["affine"]["coefficients"]
        form["affine"]["coefficients"] = [f"{c}*({e})" for e in coeffs]


@pytest.mark.parametrize("c", ["-3/2", "-1", "7"])
@pytest.mark.parametrize("name", ["logarithmic_p3.json", "cerveau_linsneto.json"])
def test_residues_survive_rescaling_the_form(problems_dir, tmp_path, name, c):
    source = problems_dir / name
    plain = run_residues(load_problem(source, crosscheck=False))
    scaled = run_residues(load_problem(_edited(source, tmp_path, lambda d: _scaled_form(d, c)), crosscheck=False))
    assert [o.value for o in scaled] == [o.value for o in plain]
    assert all(o.matches_expected for o in scaled)
    assert [o.residue.field for o in scaled] != [o.residue.field for o in plain]


# ---- global check ----------------------------------------------------------

@pytest.mark.integration
def test_twisted_cubic_check_passes(twisted_cubic_path):
    result = run_check(load_problem(twisted_cubic_path, crosscheck=False))
    assert result.passed
    assert str(result.report.lhs) == "16h^2"
    assert result.trace["components"] == 3


@pytest.mark.integration
def test_logarithmic_check_passes(logarithmic_path):
    result = run_check(load_problem(logarithmic_path, crosscheck=False))
    assert result.passed
    assert str(result.report.rhs) == "16h^2"


@pytest.mark.integration
def test_mutated_degree_fails(mutated_path):
    result = run_check(load_problem(mutated_path, crosscheck=False))
    assert not result.passed
    assert not result.report.passed
    assert str(result.report.discrepancy) == "(9/2)h^2"
    assert not result.outcomes[2].verification.passed


def test_wrong_expected_value_fails_the_run(twisted_cubic_path, tmp_path):
    path = _edited(twisted_cubic_path, tmp_path, lambda d: d["components"][1].update(expected_residue="1/2"))
    result = run_check(load_problem(path, crosscheck=False))
    assert result.report.passed
    assert result.outcomes[1].matches_expected is False
    assert not result.passed


# ---- cross-check -----------------------------------------------------------

def test_crosscheck_radius_shrinks_near_other_zeros():
    X = make_field(["2*x^2 - x - z", "-2*z + 3*x*z"], ("x", "z"))
    p = make_point((Fraction(2, 3), Fraction(2, 9)), ("x", "z"))
    gap = ((2 / 3 - 1 / 2) ** 2 + (2 / 9) ** 2) ** 0.5
    assert crosscheck_radius(X, p, 0.5) == pytest.approx(0.4 * gap)
    assert crosscheck_radius(X, p, 0.01) == 0.01


@pytest.mark.slow
def test_crosscheck_agrees_with_exact_residues(twisted_cubic_path, fast_sphere):
    result = run_check(load_problem(twisted_cubic_path, crosscheck=True, tol=1e-3))
    assert result.passed
    for outcome in result.outcomes:
        assert outcome.crosscheck is not None
        assert outcome.crosscheck.agrees


@pytest.mark.parametrize("imag, agrees", [(0.0, True), (5e-3, False)])
def test_crosscheck_needs_a_real_sphere_integral(mocker, twisted_cubic_path, imag, agrees):
    q = QuadratureResult(complex(25 / 6, imag), 1e-2, 10, (0.1,), imaginary_ok=imag == 0.0)
    mocker.patch("app.residues.pipeline.bm_residue", return_value=q)
    problem = load_problem(twisted_cubic_path, crosscheck=True, tol=1e-3)
    outcome = component_outcome(problem, problem.components[0])
    assert outcome.crosscheck.agrees is agrees
    assert outcome.passed is agrees


def test_stability_radii_stay_clear_of_other_zeros():
    X = make_field(["2*x^2 - x - z", "-2*z + 3*x*z"], ("x", "z"))
    p = make_point((Fraction(2, 3), Fraction(2, 9)), ("x", "z"))
    cap = 0.4 * ((2 / 3 - 1 / 2) ** 2 + (2 / 9) ** 2) ** 0.5
    assert stability_radii(X, p, [0.1, 0.2, 0.3]) == pytest.approx([0.1, cap])
    assert stability_radii(X, p, [0.2, 0.3]) == pytest.approx([cap / 2, cap])
    assert stability_radii(X, p, [0.05]) == [0.05]
