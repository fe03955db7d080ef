import json
import os
import sys

import pytest

# Add current directory to path so we can import src
sys.path.append(os.getcwd())

from main import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main
from src.config import get_settings, reset_settings
from src.cyclotomic import CyclotomicNumber, zeta
from src.exceptions import ScenarioParseError, UnsupportedCaseError
from src.runner import (
    KINDS,
    SCHEMA_VERSION,
    ScenarioKind,
    _cyclotomic,
    _failure,
    execute,
    list_kinds,
    load_scenario,
    run_scenario,
    run_suite,
)

TORSION = """
kind = "hilbert-torsion"
name = "torsion"

[field]
p = 5
precision = 20

[parameters]
q_values = ["5", "25"]
expected = [[4, 4, 1], [4, 4, 2]]
"""

BROKEN_PROP_SA = """
kind = "prop-sa"

[parameters]
pi0 = "5"
q = "5^4"
a = 1
b = 2
r = 3
"""

BLOCH_INTEGER_ZETA = """
kind = "bloch2cor"

[parameters]
zeta1 = [4, 1]
m1 = 4
zeta2 = -1
m2 = 2
"""

PROP_SA = """
kind = "prop-sa"

[field]
p = 5
precision = 40

[parameters]
pi0 = "5"
a = 1
b = 2
r = 3
nu = 2
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


# ===== LOADING =====

def test_every_kind_is_listed(capsys):
    assert {kind for kind, _ in list_kinds()} == {k.value for k in ScenarioKind}
    assert main(["list-kinds"]) == EXIT_PASS
    assert "prop-sa" in capsys.readouterr().out


def test_syntax_error_has_position(tmp_path):
    path = _write(tmp_path, "bad.toml", 'kind = "prop-sa"\n[parameters\na = 1\n')
    with pytest.raises(ScenarioParseError) as info:
        load_scenario(path)
    assert info.value.line == 2
    assert info.value.column is not None
    assert main(["run", path]) == EXIT_USAGE


def test_unknown_kind_is_a_usage_error(tmp_path):
    path = _write(tmp_path, "kind.toml", 'kind = "nope"\n')
    with pytest.raises(ScenarioParseError):
        load_scenario(path)
    assert main(["run", path]) == EXIT_USAGE
    assert main(["run", str(tmp_path / "missing.toml")]) == EXIT_USAGE


def test_bad_arguments_are_usage_errors():
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE


# ===== RUNNING =====

def test_run_writes_report(tmp_path):
    scenario = _write(tmp_path, "torsion.toml", TORSION)
    out = tmp_path / "report.json"
    assert main(["run", scenario, "--out", str(out)]) == EXIT_PASS
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["schema_version"] == SCHEMA_VERSION
    assert report["passed"] is True
    names = [c["name"] for c in report["checks"]]
    assert names == ["torsion q=5", "oracle q=5", "torsion q=25", "oracle q=25"]
    assert report["summary"] == {"total": 4, "passed": 4, "failed": 0, "unsupported": 0}


def test_reports_are_deterministic(tmp_path):
    scenario = _write(tmp_path, "torsion.toml", TORSION)
    first = run_scenario(scenario).payload()
    second = run_scenario(scenario).payload()
    assert first == second


def test_failed_precondition_is_a_failed_check(tmp_path):
    scenario = _write(tmp_path, "broken.toml", BROKEN_PROP_SA)
    report = run_scenario(scenario)
    assert not report.passed
    assert report.summary.failed == 1
    assert "DomainError" in report.checks[0].details["error"]
    assert main(["run", scenario]) == EXIT_FAIL


def test_unsupported_cases_are_reported():
    record = _failure("wild", UnsupportedCaseError("wild part"))
    assert record.status == "unsupported"


def test_precision_override(tmp_path):
    scenario = load_scenario(_write(tmp_path, "torsion.toml", TORSION))
    report = execute(scenario, precision=12)
    assert report.passed


def test_integer_cyclotomic_values(tmp_path):
    assert _cyclotomic(-1) == zeta(2)
    assert _cyclotomic([4, 1]) == zeta(4)
    assert _cyclotomic(3) == CyclotomicNumber.from_rational(3)
    report = run_scenario(_write(tmp_path, "bloch.toml", BLOCH_INTEGER_ZETA))
    assert report.error is None
    assert report.passed


def test_zero_overrides_are_honoured(tmp_path):
    scenario = _write(tmp_path, "prop_sa.toml", PROP_SA)
    report = run_scenario(scenario, nu=0)
    cert = report.checks[0].details["certificate"]
    assert cert["nu"] == 0
    assert cert["threshold"] == 2
    assert report.passed


def test_shipped_prop_sa_scenario(scenario_dir):
    report = run_scenario(os.path.join(scenario_dir, "04_prop_sa_123.toml"))
    assert report.passed
    ord_check = next(c for c in report.checks if c.name == "ord-lhs")
    assert ord_check.lhs == "-1"


def test_shipped_galois_scenario(scenario_dir):
    report = run_scenario(os.path.join(scenario_dir, "14_galois_beta.toml"))
    assert report.passed


@pytest.mark.parametrize("name", ["16_o_k_ramified.toml", "17_formula_table_pi0_10.toml"])
def test_shipped_general_uniformizer_scenarios(scenario_dir, name):
    report = run_scenario(os.path.join(scenario_dir, name))
    assert report.passed


# ===== SUITES =====

def test_empty_suite_passes_with_warning(tmp_path):
    suite = run_suite(str(tmp_path))
    assert suite.passed
    assert suite.summary.total == 0
    assert suite.warnings
    assert main(["suite", str(tmp_path)]) == EXIT_PASS


def test_suite_aggregates_in_name_order(tmp_path):
    _write(tmp_path, "b_broken.toml", BROKEN_PROP_SA)
    _write(tmp_path, "a_torsion.toml", TORSION)
    _write(tmp_path, "c_syntax.toml", "kind = \n")
    suite = run_suite(str(tmp_path), jobs=1)
    assert [os.path.basename(r.path) for r in suite.reports] == ["a_torsion.toml", "b_broken.toml", "c_syntax.toml"]
    assert not suite.passed
    assert suite.reports[0].passed
    assert suite.reports[2].checks[0].name == "parse"
    assert main(["suite", str(tmp_path)]) == EXIT_FAIL


def test_crashing_scenario_does_not_abort_suite(tmp_path, monkeypatch):
    def explode(sc, fld, nu):
        raise RuntimeError("handler blew up")

    monkeypatch.setitem(KINDS, ScenarioKind.O_K, ("explodes", explode))
    _write(tmp_path, "a_prop_sa.toml", PROP_SA)
    _write(tmp_path, "b_o_k.toml", PROP_SA.replace('"prop-sa"', '"o-k"'))
    suite = run_suite(str(tmp_path), jobs=1)
    assert len(suite.reports) == 2
    assert suite.reports[0].passed
    crashed = suite.reports[1]
    assert not crashed.passed
    assert crashed.checks[0].name == "crash"
    assert "RuntimeError" in crashed.error
    assert not suite.passed


def test_schema_command(tmp_path):
    out = tmp_path / "schema.json"
    assert main(["schema", "--out", str(out)]) == EXIT_PASS
    schema = json.loads(out.read_text(encoding="utf-8"))
    assert "checks" in schema["properties"]


# ===== SETTINGS =====

def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("REGULATOR_PRECISION", "60")
    monkeypatch.setenv("REGULATOR_QUAD_TOLERANCES", "1e-11,1e-8")
    monkeypatch.setenv("REGULATOR_LOG_LEVEL", "debug")
    reset_settings()
    s = get_settings()
    assert s.precision == 60
    assert s.quad_tolerances == [1e-8, 1e-11]
    assert s.log_level == "DEBUG"


def test_bad_settings_fall_back(monkeypatch):
    monkeypatch.setenv("REGULATOR_PRECISION", "lots")
    monkeypatch.setenv("REGULATOR_NU", "-3")
    monkeypatch.setenv("REGULATOR_LOG_LEVEL", "chatty")
    reset_settings()
    s = get_settings()
    assert s.precision == 40
    assert s.nu == 2
    assert s.log_level == "INFO"
