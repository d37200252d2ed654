"""
Tests for report rendering and the Graphviz views of resolutions and jet trees.
"""

import json
from fractions import Fraction

import networkx as nx
import pytest

from folbound.blowup import BlowupEngine, resolve_curve
from folbound.branch import ramified_lift
from folbound.jets import build_jet_tree
from folbound.report import (
    center_graph,
    dual_graph,
    jet_tree_dot,
    render,
    render_json,
    render_text,
    resolution_dot,
    to_dot,
    tree_summary,
)


@pytest.fixture
def sample_report():
    """
    A small nested report with exact values.
    """
    return {
        "case": "sample",
        "lhs": 2,
        "rhs": Fraction(3, 2),
        "passed": True,
        "missing": None,
        "nested": {"values": [1, Fraction(1, 2)], "empty": {}},
    }


def test_render_json_keeps_exact_values(sample_report):
    """Test that rationals become "p/q" strings and integers stay integers."""
    data = json.loads(render_json(sample_report))
    assert data["lhs"] == 2
    assert data["rhs"] == "3/2"
    assert data["passed"] is True
    assert data["missing"] is None
    assert data["nested"]["values"] == [1, "1/2"]


def test_render_text(sample_report):
    """Test the indented text layout."""
    text = render_text(sample_report)
    lines = text.splitlines()
    assert "case: sample" in lines
    assert "rhs: 3/2" in lines
    assert "passed: yes" in lines
    assert "missing: -" in lines
    assert "nested:" in lines
    assert "    [1, 1/2]" in lines
    assert "  empty: {}" in lines


def test_render_dispatch(sample_report):
    """Test format selection."""
    assert render(sample_report, "json") == render_json(sample_report)
    assert render(sample_report) == render_text(sample_report)
    with pytest.raises(ValueError):
        render(sample_report, "yaml")


def test_to_dot_undirected_and_directed():
    """Test DOT output for both graph kinds."""
    g = nx.Graph()
    g.add_node("a", label='say "hi"')
    g.add_edge("a", "b")
    dot = to_dot(g, "small")
    assert dot.startswith('graph "small" {')
    assert '"a" -- "b";' in dot
    assert 'label="say \\"hi\\""' in dot

    d = nx.DiGraph()
    d.add_edge(1, 2, style="dashed")
    dot = to_dot(d)
    assert dot.startswith('digraph "G" {')
    assert '"1" -> "2" [style="dashed"];' in dot


def test_center_graph_of_cusp(cusp):
    """Test centers, parent edges and the attachment leaf."""
    tree = resolve_curve([cusp])
    g = center_graph(tree)
    assert {"P0", "P1", "P2", "gamma"} <= set(g.nodes)
    assert g.has_edge("P0", "P1")
    assert g.has_edge("P1", "P2")
    assert g.has_edge("P2", "gamma")
    assert "digraph" in resolution_dot(tree)


def test_dual_graph_kinds(cusp, cusp_hamiltonian, weighted_field):
    """Test component kinds for invariant and dicritical resolutions."""
    tree = BlowupEngine([cusp.germ()], field=cusp_hamiltonian).resolve()
    g = dual_graph(tree)
    assert sorted(g.nodes) == ["D1", "D2", "D3"]
    assert g.number_of_edges() == 2
    assert {g.nodes[n]["kind"] for n in g.nodes} == {"invariant"}
    assert g.nodes["D3"]["label"] == "D3 w=2"

    tree = BlowupEngine([cusp.germ()], field=weighted_field).resolve()
    g = dual_graph(tree)
    assert g.nodes["D3"]["kind"] == "dicritical"


def test_tree_summary(cusp, cusp_hamiltonian):
    """Test the report form of a resolution."""
    tree = BlowupEngine([cusp.germ()], field=cusp_hamiltonian).resolve()
    summary = tree_summary(tree)
    assert len(summary["centers"]) == 3
    assert [c["nu"] for c in summary["centers"]] == [1, 1, 2]
    assert sorted(summary["dual_edges"]) == [[1, 3], [2, 3]]
    assert summary["attachments"]["gamma"]["component"] == 3
    assert [c["weight"] for c in summary["components"]] == [1, 1, 2]


def test_jet_tree_dot(cusp):
    """Test that divisorial jets are drawn as boxes."""
    jets = build_jet_tree(ramified_lift([cusp]))
    dot = jet_tree_dot(jets, "cusp_jets")
    assert dot.startswith('digraph "cusp_jets" {')
    assert dot.count('shape="box"') == 1
    assert dot.count(" -> ") == 2
