"""
Jet tree of a set of smooth branches.

Nodes are the jets j_l with at least two branches through them; they are the
blow-up centers of the minimal resolution of the ramified curve, and the
tree doubles as the dual graph of its exceptional divisor.
"""

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .algebra import Scalar, format_scalar
from .branch import SmoothBranchSet
from .errors import InvalidBranch, OrderBeyondTruncation, SingularityRequired, TruncationInsufficient
from .utils.logger import get_logger

logger = get_logger(__name__)


class JetNode:
    """One blow-up center of the ramified curve: a jet shared by at least two branches."""

    __slots__ = ("node_id", "order", "jet", "fiber", "parent", "children", "terminal", "divisorial")

    def __init__(self, node_id: int, order: int, jet: Tuple[Scalar, ...], fiber: frozenset, parent: Optional[int]):
        self.node_id = node_id
        self.order = order
        self.jet = jet
        self.fiber = fiber
        self.parent = parent
        self.children: List[int] = []
        self.terminal = False
        self.divisorial = False

    def label(self) -> str:
        flags = ("T" if self.terminal else "") + ("D" if self.divisorial else "")
        return f"l={self.order} |{len(self.fiber)}| {flags}".strip()

    def __repr__(self) -> str:
        return f"JetNode({self.node_id}, order={self.order}, fiber={sorted(self.fiber)}, T={self.terminal}, D={self.divisorial})"


class JetTree:
    """
    The tree of jets with fiber at least two.

    Args:
        lifted: The smooth branch set the tree was built from
        nodes: Nodes in breadth-first order, node 0 being the origin
    """

    def __init__(self, lifted: SmoothBranchSet, nodes: Sequence[JetNode]):
        self.lifted = lifted
        self.nodes = list(nodes)

    @property
    def root(self) -> JetNode:
        return self.nodes[0]

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def mu_T(self) -> int:
        return sum(1 for node in self.nodes if node.terminal)

    @property
    def mu_D(self) -> int:
        return sum(1 for node in self.nodes if node.divisorial)

    def deepest_nodes(self) -> Dict[int, int]:
        """Branch index -> the last node whose fiber contains it."""
        deepest: Dict[int, int] = {}
        # breadth-first order, so later nodes are deeper
        for node in self.nodes:
            for k in node.fiber:
                deepest[k] = node.node_id
        return deepest

    def nodes_at_order(self, order: int) -> List[JetNode]:
        return [node for node in self.nodes if node.order == order]

    def graph(self) -> nx.DiGraph:
        """Directed tree, edges from a center to the centers infinitely near to it."""
        g = nx.DiGraph()
        for node in self.nodes:
            g.add_node(
                node.node_id,
                order=node.order,
                fiber_size=len(node.fiber),
                terminal=node.terminal,
                divisorial=node.divisorial,
                label=node.label(),
            )
        for node in self.nodes:
            if node.parent is not None:
                g.add_edge(node.parent, node.node_id)
        return g

    def dual_graph(self) -> nx.Graph:
        """Dual graph of the exceptional divisor: components meet along parent links only."""
        return self.graph().to_undirected()

    def jet_string(self, node: JetNode) -> str:
        return "(" + ", ".join(format_scalar(c) for c in node.jet) + ")"


def build_jet_tree(lifted: SmoothBranchSet) -> JetTree:
    """
    Build the jet tree of a smooth branch set.

    Args:
        lifted: Output of ramified_lift

    Returns:
        JetTree: Nodes for every (l, jet) with fiber of size at least 2

    Raises:
        SingularityRequired: If fewer than two branches are given
        TruncationInsufficient: If two branches agree through their known precision
    """
    series = lifted.series
    if len(series) < 2:
        raise SingularityRequired("the jet tree needs a singular curve (at least two smooth lifts)")
    for a in range(len(series)):
        for b in range(a + 1, len(series)):
            if series[a].is_exact and series[b].is_exact and series[a] == series[b]:
                raise InvalidBranch(f"lifts {a} and {b} coincide")

    root = JetNode(0, 0, (series[0].coefficient(0),), frozenset(range(len(series))), None)
    if any(s.coefficient(0) for s in series):
        raise InvalidBranch("every lift must pass through the origin")
    nodes = [root]
    queue = [root]
    while queue:
        node = queue.pop(0)
        nxt = node.order + 1
        groups: Dict[Scalar, List[int]] = defaultdict(list)
        for k in sorted(node.fiber):
            try:
                groups[series[k].coefficient(nxt)].append(k)
            except OrderBeyondTruncation as e:
                raise TruncationInsufficient(
                    f"lift {lifted[k].label} is not known at order {nxt}, needed to split {len(node.fiber)} branches"
                ) from e
        ordered = sorted(groups.items(), key=lambda item: item[1][0])
        node.terminal = all(len(members) == 1 for _, members in ordered)
        node.divisorial = any(len(members) == 1 for _, members in ordered)
        for coeff, members in ordered:
            if len(members) < 2:
                continue
            child = JetNode(len(nodes), nxt, node.jet + (coeff,), frozenset(members), node.node_id)
            node.children.append(child.node_id)
            nodes.append(child)
            queue.append(child)
    tree = JetTree(lifted, nodes)
    logger.debug(f"Jet tree: {len(nodes)} nodes, mu_T={tree.mu_T}, mu_D={tree.mu_D}")
    return tree


def virtual_multiplicities(tree: JetTree) -> Tuple[int, int]:
    """(μ_T, μ_D): the numbers of terminal and divisorial jets."""
    return tree.mu_T, tree.mu_D


@dataclass(frozen=True)
class PackagePartition:
    """Branches of 𝔠 grouped by the divisorial node where they separate."""

    packages: Dict[int, Tuple[int, ...]]
    representatives: Dict[int, int]
    labels: Dict[int, str]

    @property
    def nu_subcurve(self) -> int:
        """ν_0(Γ′): one smooth representative per package."""
        return len(self.packages)

    def as_dict(self) -> Dict[str, object]:
        return {
            "count": len(self.packages),
            "nu_subcurve": self.nu_subcurve,
            "packages": [
                {
                    "node": node,
                    "members": list(members),
                    "representative": self.representatives[node],
                    "label": self.labels[node],
                }
                for node, members in sorted(self.packages.items())
            ],
        }


def package_subcurve(tree: JetTree) -> PackagePartition:
    """
    Partition 𝔠 into packages and pick the lowest index of each as representative.

    Returns:
        PackagePartition: One package per divisorial node
    """
    grouped: Dict[int, List[int]] = defaultdict(list)
    for k, node_id in sorted(tree.deepest_nodes().items()):
        grouped[node_id].append(k)
    packages = {node_id: tuple(sorted(members)) for node_id, members in grouped.items()}
    representatives = {node_id: members[0] for node_id, members in packages.items()}
    labels = {node_id: tree.lifted[rep].label for node_id, rep in representatives.items()}
    for node_id in packages:
        if not tree.nodes[node_id].divisorial:
            raise InvalidBranch(f"package at non-divisorial node {node_id}")
    return PackagePartition(packages=packages, representatives=representatives, labels=labels)


def count_centers_by_order(lifted: SmoothBranchSet) -> Dict[int, int]:
    """
    Brute-force count of order-l jets shared by two or more lifts.

    Uses the pairwise contact matrix: two lifts share their l-jet iff their
    contact order exceeds l.
    """
    contact = lifted.contact_matrix()
    size = len(contact)
    top = max((int(v) for row in contact for v in row if v != float("inf")), default=0)
    counts: Dict[int, int] = {}
    for l in range(top):
        classes: List[List[int]] = []
        for k in range(size):
            for cls in classes:
                if contact[cls[0]][k] > l:
                    cls.append(k)
                    break
            else:
                classes.append([k])
        shared = sum(1 for cls in classes if len(cls) >= 2)
        if shared:
            counts[l] = shared
    return counts
