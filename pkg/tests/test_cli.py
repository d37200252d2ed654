"""
Tests for the command line: commands, exit codes, report formats, DOT output and batch mode.
"""

import json
import os
import shutil
from pathlib import Path

import pytest

from folbound.casefile import load_case, parse_case
from folbound.cli import EXIT_ERROR, EXIT_FAIL, EXIT_PASS, CaseResult, applicable_commands, main, run, run_file

from tests.conftest import CASES_DIR, SAMPLES_DIR, load_case_text


def sample(name):
    return os.path.join(SAMPLES_DIR, name)


@pytest.fixture(autouse=True)
def quiet_env(clean_env, monkeypatch):
    """
    Keep the command line from reading a developer's .env file.
    """
    monkeypatch.setattr("folbound.cli.load_env_file", lambda: {"FOLBOUND_WORKERS": 1})


def test_case_result_exit_code():
    """Test that one failed verdict fails the case."""
    result = CaseResult(case="c")
    assert result.exit_code == EXIT_PASS
    result.verdicts.update({"a": True, "b": False})
    assert result.exit_code == EXIT_FAIL
    assert result.as_dict()["verdicts"] == {"a": "pass", "b": "fail"}


def test_applicable_commands():
    """Test what `all` expands to for different cases."""
    weighted = load_case(sample("cusp_weighted.json"))
    assert applicable_commands(weighted) == ["invariants", "resolve", "indices", "hertling", "theorem1", "diagnostics"]

    axes = load_case(sample("axes_radial.json"))
    commands = applicable_commands(axes)
    assert "theorem1" not in commands
    assert "theorem2" in commands and "theorem3" in commands

    line = load_case(sample("line_radial_global.json"))
    assert applicable_commands(line) == ["theorem4", "diagnostics"]

    p5 = load_case(sample("cusp_weighted_p5.json"))
    assert applicable_commands(p5) == ["indices", "hertling", "theorem1", "diagnostics"]


def test_run_rejects_unknown_command():
    """Test command validation."""
    case = parse_case(load_case_text("cusp_hamiltonian.json"))
    with pytest.raises(ValueError):
        run(case, "theorem9")


def test_run_invariants_section():
    """Test the invariants section of the four-branch sample."""
    result = run(load_case(sample("four_branches.json")), "invariants")
    section = result.sections["invariants"]
    assert section["mu_T"] == 6
    assert section["mu_D"] == 9
    assert section["ramification"] == 6
    assert section["jet_nodes"] == 29
    assert section["nu_Gamma"] == 21
    assert section["packages"]["count"] == 9
    assert len(result.dot) == 1
    assert result.exit_code == EXIT_PASS


def test_run_file_error_report():
    """Test that hypothesis errors become exit code 2 with an error report."""
    code, text = run_file(Path(CASES_DIR) / "not_invariant.json", "all", "json")
    assert code == EXIT_ERROR
    data = json.loads(text)
    assert data["verdict"] == "error"
    assert data["error"] == "NotInvariant"


def test_main_json_report(capsys):
    """Test a passing command with a JSON report on stdout."""
    code = main(["theorem2", sample("cusp_hamiltonian.json"), "--report", "json"])
    assert code == EXIT_PASS
    data = json.loads(capsys.readouterr().out)
    assert data["case"] == "cusp_hamiltonian"
    assert data["verdict"] == "pass"
    assert data["theorem2"]["lhs"] == 2


def test_main_uses_case_report_format(capsys):
    """Test that the case's report_format applies without --report."""
    code = main(["invariants", sample("four_branches.json")])
    assert code == EXIT_PASS
    data = json.loads(capsys.readouterr().out)
    assert data["invariants"]["mu_D"] == 9


def test_main_text_report(capsys):
    """Test the text layout of a theorem section."""
    code = main(["theorem1", sample("cusp_weighted.json")])
    assert code == EXIT_PASS
    out = capsys.readouterr().out
    assert "case: cusp_weighted" in out
    assert "theorem1:" in out


def test_main_not_weakly_isolated(capsys):
    """Test that theorem 2 refuses a curve that is not weakly isolated."""
    code = main(["theorem2", sample("cusp_weighted.json")])
    assert code == EXIT_ERROR
    assert "NotWeaklyIsolated" in capsys.readouterr().err


def test_main_missing_global(capsys):
    """Test theorem 4 on a case without a global curve."""
    assert main(["theorem4", sample("cusp_hamiltonian.json")]) == EXIT_ERROR


def test_main_bad_case_file(capsys):
    """Test malformed input."""
    assert main(["invariants", os.path.join(CASES_DIR, "bad_literal.json")]) == EXIT_ERROR
    assert "CaseFileError" in capsys.readouterr().err


def test_main_requires_case():
    """Test that a case file is needed without --batch."""
    with pytest.raises(SystemExit) as excinfo:
        main(["invariants"])
    assert excinfo.value.code == 2


def test_main_writes_dot(tmp_path, capsys):
    """Test --dot for the resolution and the dual graph."""
    target = tmp_path / "cusp.dot"
    code = main(["resolve", sample("cusp_hamiltonian.json"), "--dot", str(target)])
    assert code == EXIT_PASS
    dot = target.read_text()
    assert 'digraph "cusp_hamiltonian_resolution"' in dot
    assert 'graph "cusp_hamiltonian_dual"' in dot


def test_main_dot_without_graph(tmp_path, capsys):
    """Test that commands without graphs leave --dot unwritten."""
    target = tmp_path / "none.dot"
    main(["theorem4", sample("line_radial_global.json"), "--dot", str(target)])
    assert not target.exists()


def test_main_global_case(capsys):
    """Test the degree bound through the command line."""
    code = main(["theorem4", sample("two_lines_global.json"), "--report", "json"])
    assert code == EXIT_PASS
    data = json.loads(capsys.readouterr().out)
    assert data["theorem4"]["rhs"] == 2
    assert data["theorem4"]["quantities"]["line_at_infinity"]["line_invariant"] is True


def test_batch_mode(tmp_path, capsys):
    """Test reports written beside each case and the worst exit code."""
    shutil.copy(sample("cusp_hamiltonian.json"), tmp_path / "cusp_hamiltonian.json")
    shutil.copy(os.path.join(CASES_DIR, "not_invariant.json"), tmp_path / "not_invariant.json")
    code = main(["theorem1", "--batch", str(tmp_path), "--report", "json", "--workers", "1"])
    assert code == EXIT_ERROR
    good = json.loads((tmp_path / "cusp_hamiltonian.report.json").read_text())
    assert good["verdict"] == "pass"
    bad = json.loads((tmp_path / "not_invariant.report.json").read_text())
    assert bad["error"] == "NotInvariant"


def test_batch_mode_text_reports(tmp_path):
    """Test the text extension and a passing batch."""
    shutil.copy(sample("line_radial_global.json"), tmp_path / "line.json")
    assert main(["all", "--batch", str(tmp_path)]) == EXIT_PASS
    assert (tmp_path / "line.report.txt").read_text().startswith("case: line_radial_global")


def test_batch_needs_directory(tmp_path):
    """Test --batch on something that is not a directory."""
    assert main(["all", "--batch", str(tmp_path / "missing")]) == EXIT_ERROR


def test_invalid_configuration(monkeypatch):
    """Test that bad settings exit with code 2."""
    def broken():
        raise ValueError("FOLBOUND_PRECISION (32) exceeds FOLBOUND_MAX_ORDER (16)")

    monkeypatch.setattr("folbound.cli.load_env_file", broken)
    assert main(["invariants", sample("cusp_hamiltonian.json")]) == EXIT_ERROR


def test_main_saturates_input_field(capsys):
    """Test theorem 2 on a radial field given with a common factor x + y."""
    code = main(["theorem2", os.path.join(CASES_DIR, "common_factor.json"), "--report", "json"])
    assert code == EXIT_PASS
    data = json.loads(capsys.readouterr().out)
    assert data["theorem2"]["lhs"] == 2
    assert data["theorem2"]["rhs"] == 2


def test_main_truncation_audit_before_any_command(capsys):
    """Test that resolve refuses branches the truncation audit cannot separate."""
    assert main(["resolve", os.path.join(CASES_DIR, "unseparated.json")]) == EXIT_ERROR
    assert "CaseFileError" in capsys.readouterr().err
