"""
Integration tests for folbound.

These tests run every sample case in cases/ through the full chain: parsing,
the truncation audit, resolutions, theorem checks and report rendering.
"""

import json
import os

import pytest

from folbound.casefile import load_case
from folbound.cli import EXIT_PASS, run
from folbound.report import render

from tests.conftest import SAMPLES_DIR

SAMPLES = sorted(f for f in os.listdir(SAMPLES_DIR) if f.endswith(".json"))


def run_sample(name, command="all"):
    return run(load_case(os.path.join(SAMPLES_DIR, name)), command)


@pytest.mark.parametrize("name", SAMPLES)
def test_sample_passes(name):
    """Test that every sample case passes and renders in both formats."""
    result = run_sample(name)
    assert result.exit_code == EXIT_PASS, result.verdicts
    data = json.loads(render(result.as_dict(), "json"))
    assert data["verdict"] == "pass"
    assert render(result.as_dict(), "text").startswith("case: ")


def test_cusp_hamiltonian_workflow():
    """Test every command on the cusp with its hamiltonian."""
    result = run_sample("cusp_hamiltonian.json")
    assert list(result.sections) == [
        "invariants",
        "resolve",
        "indices",
        "hertling",
        "theorem1",
        "theorem2",
        "theorem3",
        "diagnostics",
    ]
    assert result.sections["invariants"]["mu_T"] == 1
    assert len(result.sections["resolve"]["centers"]) == 3
    assert result.sections["hertling"]["identity"]["lhs"] == 2
    assert result.sections["hertling"]["z_recursion"]["gamma"]["z"] == 2
    assert all(step["holds"] for step in result.sections["hertling"]["generalized_curve"])
    assert result.sections["theorem1"]["quantities"]["refined_bound"] == 1
    assert result.sections["theorem3"]["quantities"]["Z_F"] == 2
    diagnostics = result.sections["diagnostics"]
    assert diagnostics["proof"]["path"]["theta"] == {"0": 0, "1": 0, "2": "1/2"}
    assert diagnostics["virtual"]["gamma"]["verdict"] == "pass"


def test_weighted_cusp_skips_weak_isolation_theorems():
    """Test that `all` leaves out theorems 2 and 3 for a dicritical resolution."""
    result = run_sample("cusp_weighted.json")
    assert "theorem2" not in result.sections
    assert "theorem3" not in result.sections
    assert result.sections["theorem1"]["quantities"]["N"] == 1
    assert result.sections["diagnostics"]["proof"]["weak_isolation"]["weakly_isolated"] is False
    assert "blowup" not in result.sections["diagnostics"]


def test_weighted_family_p5():
    """Test the p = 5 member: Hertling's identity with a dicritical component."""
    result = run_sample("cusp_weighted_p5.json")
    assert result.sections["indices"]["nu_F"] == 1
    assert result.sections["indices"]["branches"]["gamma"]["Z"] == 1
    assert result.sections["hertling"]["identity"]["equal"] is True
    assert result.sections["theorem1"]["lhs"] == 1


def test_four_branch_curve_invariants():
    """Test the jet tree numbers and pairwise intersections of the four-branch curve."""
    section = run_sample("four_branches.json").sections["invariants"]
    assert (section["mu_T"], section["mu_D"]) == (6, 9)
    for pair in section["intersections"].values():
        assert pair["intersection"] == pair["noether"]


def test_axes_with_radial_field():
    """Test weak isolation through two null lines."""
    result = run_sample("axes_radial.json")
    wi = result.sections["diagnostics"]["proof"]["weak_isolation"]
    assert wi["weakly_isolated"] is True
    assert sorted(wi["nulls"]) == ["x_axis", "y_axis"]
    assert result.sections["theorem3"]["quantities"]["Z_H"] == 1
    assert result.sections["diagnostics"]["blowup"]["vacuous_points"] == 2


def test_global_samples():
    """Test the Poincaré–Hopf balances of the global samples."""
    line = run_sample("line_radial_global.json").sections
    assert line["diagnostics"]["poincare_hopf"]["Z_F"] == 1
    assert line["diagnostics"]["poincare_hopf"]["chi"] == 2

    lines = run_sample("two_lines_global.json").sections
    assert lines["diagnostics"]["poincare_hopf"]["field_side"] == "skipped"
    assert lines["diagnostics"]["poincare_hopf"]["chi"] == 4
    assert lines["theorem4"]["statement"] == "deg(Gamma) <= 2 deg(F) + 2"

    cubic = run_sample("cusp_cubic_global.json").sections
    assert cubic["theorem4"]["lhs"] == 3
    assert cubic["theorem4"]["rhs"] == 3
    assert cubic["diagnostics"]["poincare_hopf"]["Z_H"] == 2
