"""
Report rendering: plain text, JSON and Graphviz DOT.

Reports are nested dicts of exact integers, "p/q" strings, booleans and
strings, so the JSON form re-parses to the same values.
"""

import json
from typing import Any, Dict, List

import networkx as nx

from .algebra import exact_number, format_scalar
from .blowup import ResolutionTree
from .jets import JetTree


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (str, bool)) or value is None:
        return value
    return exact_number(value)


def render_json(report: Dict[str, Any]) -> str:
    return json.dumps(_plain(report), indent=2)


def _text_lines(value: Any, indent: int, out: List[str]):
    pad = "  " * indent
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                out.append(f"{pad}{key}:")
                _text_lines(item, indent + 1, out)
            else:
                out.append(f"{pad}{key}: {_scalar_text(item)}")
    elif isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            out.append(f"{pad}[{', '.join(_scalar_text(v) for v in value)}]")
            return
        for item in value:
            out.append(f"{pad}-")
            _text_lines(item, indent + 1, out)
    else:
        out.append(f"{pad}{_scalar_text(value)}")


def _scalar_text(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, dict):
        return "{}"
    if isinstance(value, list):
        return "[]"
    return str(value)


def render_text(report: Dict[str, Any]) -> str:
    lines: List[str] = []
    _text_lines(_plain(report), 0, lines)
    return "\n".join(lines)


def render(report: Dict[str, Any], fmt: str = "text") -> str:
    if fmt == "json":
        return render_json(report)
    if fmt == "text":
        return render_text(report)
    raise ValueError(f"unknown report format {fmt!r}")


# ----------------------------------------------------------------------------
# Graphs
# ----------------------------------------------------------------------------

def _dot_value(value: Any) -> str:
    text = str(value)
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: nx.Graph, name: str = "G") -> str:
    """DOT source for a networkx graph, node and edge attributes kept."""
    directed = graph.is_directed()
    arrow = "->" if directed else "--"
    lines = [f"{'digraph' if directed else 'graph'} {_dot_value(name)} {{"]
    for node, attrs in graph.nodes(data=True):
        rendered = ", ".join(f"{k}={_dot_value(v)}" for k, v in attrs.items())
        lines.append(f"  {_dot_value(node)}" + (f" [{rendered}]" if rendered else "") + ";")
    for u, v, attrs in graph.edges(data=True):
        rendered = ", ".join(f"{k}={_dot_value(val)}" for k, val in attrs.items())
        lines.append(f"  {_dot_value(u)} {arrow} {_dot_value(v)}" + (f" [{rendered}]" if rendered else "") + ";")
    lines.append("}")
    return "\n".join(lines) + "\n"


def center_graph(tree: ResolutionTree) -> nx.DiGraph:
    """Centers as nodes, edges from each center to the ones infinitely near to it."""
    g = nx.DiGraph()
    for c in tree.centers:
        label = f"P{c.center_id}"
        if c.nu is not None:
            label += f" nu={c.nu}" + (" dic" if c.dicritical else "")
        g.add_node(
            f"P{c.center_id}",
            label=label,
            chart=c.chart,
            v0=format_scalar(c.v0),
            multiplicity=c.total_multiplicity,
        )
        if c.parent is not None:
            g.add_edge(f"P{c.parent}", f"P{c.center_id}")
    for name, att in tree.attachments.items():
        g.add_node(name, shape="plaintext", label=name)
        if att.parent_center is not None:
            g.add_edge(f"P{att.parent_center}", name, style="dashed")
    return g


def dual_graph(tree: ResolutionTree) -> nx.Graph:
    """Exceptional components as nodes, corners as edges."""
    g = nx.Graph()
    for cid, comp in sorted(tree.components.items()):
        kind = "dicritical" if comp.dicritical else ("invariant" if comp.invariant else "curve")
        g.add_node(f"D{cid}", label=f"D{cid} w={comp.weight}", kind=kind)
    for a, b in tree.dual.edges():
        g.add_edge(f"D{a}", f"D{b}")
    return g


def resolution_dot(tree: ResolutionTree, name: str = "resolution") -> str:
    return to_dot(center_graph(tree), name)


def jet_tree_dot(tree: JetTree, name: str = "jets") -> str:
    g = nx.DiGraph()
    for node_id, attrs in tree.graph().nodes(data=True):
        shape = "box" if attrs["divisorial"] else "ellipse"
        g.add_node(node_id, label=attrs["label"], shape=shape, order=attrs["order"])
    g.add_edges_from(tree.graph().edges())
    return to_dot(g, name)


def tree_summary(tree: ResolutionTree) -> Dict[str, Any]:
    """Centers, components and attachments of a resolution, for reports."""
    centers = []
    for c in tree.centers:
        entry: Dict[str, Any] = {
            "center": c.center_id,
            "parent": c.parent,
            "chart": c.chart,
            "v0": format_scalar(c.v0),
            "components": list(c.components),
            "multiplicities": dict(c.multiplicities),
        }
        if c.nu is not None:
            entry.update({"nu": c.nu, "dicritical": c.dicritical, "tau": c.tau})
        centers.append(entry)
    components = [
        {"component": cid, "center": comp.center, "weight": comp.weight, "invariant": comp.invariant}
        for cid, comp in sorted(tree.components.items())
    ]
    attachments = {
        name: {"component": att.component, "center": att.parent_center, "kappa": att.kappa}
        for name, att in tree.attachments.items()
    }
    return {
        "centers": centers,
        "components": components,
        "attachments": attachments,
        "dual_edges": [sorted(e) for e in sorted(tree.dual.edges())],
    }
