"""
Tests for the jet tree of a ramified curve, virtual multiplicities and packages.
"""

import random
from collections import Counter

import networkx as nx
import pytest

from folbound.branch import PuiseuxBranch, ramified_lift
from folbound.errors import SingularityRequired
from folbound.jets import build_jet_tree, count_centers_by_order, package_subcurve, virtual_multiplicities


@pytest.fixture
def four_branch_jets(four_branch_curve):
    """
    Jet tree of the four-branch curve.
    """
    return build_jet_tree(ramified_lift(four_branch_curve))


def test_cusp_jet_tree(cusp):
    """Test the chain of three jets shared by u³ and -u³."""
    tree = build_jet_tree(ramified_lift([cusp]))
    assert len(tree) == 3
    assert [node.order for node in tree.nodes] == [0, 1, 2]
    assert virtual_multiplicities(tree) == (1, 1)
    last = tree.nodes[-1]
    assert last.terminal and last.divisorial
    partition = package_subcurve(tree)
    assert partition.nu_subcurve == 1
    assert partition.packages == {last.node_id: (0, 1)}


def test_transverse_lines_share_only_the_origin(x_axis, diagonal):
    """Test that y = 0 and y = x separate at the first jet."""
    tree = build_jet_tree(ramified_lift([x_axis, diagonal]))
    assert len(tree) == 1
    assert tree.root.terminal and tree.root.divisorial
    assert (tree.mu_T, tree.mu_D) == (1, 1)


def test_smooth_branch_is_refused():
    """Test that a single smooth branch has no jet tree."""
    line = PuiseuxBranch.from_terms("line", 1, [(1, 1)])
    with pytest.raises(SingularityRequired):
        build_jet_tree(ramified_lift([line]))


def test_four_branch_jet_tree_shape(four_branch_jets):
    """Test 29 nodes: a chain of eight nodes carrying all 21 lifts, then three sub-trees."""
    assert len(four_branch_jets.lifted) == 21
    assert four_branch_jets.lifted.ramification == 6
    assert len(four_branch_jets) == 29
    for order in range(8):
        nodes = four_branch_jets.nodes_at_order(order)
        assert len(nodes) == 1
        assert len(nodes[0].fiber) == 21
    assert len(four_branch_jets.nodes_at_order(8)) == 3


def test_four_branch_virtual_multiplicities(four_branch_jets):
    """Test μ_T = 6 and μ_D = 9."""
    assert virtual_multiplicities(four_branch_jets) == (6, 9)


def test_four_branch_packages(four_branch_jets):
    """Test nine packages covering every lift once."""
    partition = package_subcurve(four_branch_jets)
    assert partition.nu_subcurve == 9
    members = sorted(k for package in partition.packages.values() for k in package)
    assert members == list(range(21))
    assert partition.as_dict()["count"] == 9


def test_brute_force_center_count_agrees(four_branch_jets):
    """Test the pairwise-contact count of shared jets against the tree."""
    by_order = Counter(node.order for node in four_branch_jets.nodes)
    assert count_centers_by_order(four_branch_jets.lifted) == dict(by_order)


def test_jet_tree_graph(four_branch_jets):
    """Test the networkx view of the tree."""
    graph = four_branch_jets.graph()
    assert graph.number_of_nodes() == 29
    assert graph.number_of_edges() == 28
    assert graph.nodes[0]["order"] == 0


def test_jet_tree_ignores_branch_order(four_branch_curve, four_branch_jets):
    """Test that shuffling the input branches gives an isomorphic tree with the same counts."""
    rng = random.Random(5)
    expected = four_branch_jets.graph()
    for _ in range(4):
        shuffled = list(four_branch_curve)
        rng.shuffle(shuffled)
        tree = build_jet_tree(ramified_lift(shuffled))
        assert len(tree) == len(four_branch_jets)
        assert virtual_multiplicities(tree) == virtual_multiplicities(four_branch_jets)
        assert Counter(node.order for node in tree.nodes) == Counter(node.order for node in four_branch_jets.nodes)
        assert package_subcurve(tree).nu_subcurve == package_subcurve(four_branch_jets).nu_subcurve
        assert nx.is_isomorphic(
            tree.graph(),
            expected,
            node_match=lambda a, b: (a["order"], a["fiber_size"], a["terminal"], a["divisorial"])
            == (b["order"], b["fiber_size"], b["terminal"], b["divisorial"]),
        )


IRREDUCIBLE_CORPUS = [
    (2, (3,), 1),
    (2, (5,), 1),
    (2, (7,), 1),
    (2, (9,), 1),
    (3, (4,), 1),
    (3, (5,), 1),
    (3, (7,), 1),
    (3, (8,), 1),
    (4, (5,), 1),
    (4, (7,), 1),
    (5, (6,), 1),
    (5, (7,), 1),
    (4, (6, 7), 2),
    (4, (6, 9), 2),
    (4, (10, 11), 2),
    (6, (9, 10), 2),
    (6, (8, 9), 3),
    (9, (12, 14), 3),
    (8, (12, 14, 15), 4),
    (12, (18, 21, 22), 4),
]


@pytest.mark.parametrize("n,betas,mu", IRREDUCIBLE_CORPUS)
def test_irreducible_virtual_multiplicities_agree(n, betas, mu):
    """Test μ_T = μ_D = μ for an irreducible branch with random characteristic coefficients."""
    rng = random.Random(n * 1000 + sum(betas))
    terms = [(b, rng.choice([-3, -2, -1, 1, 2, 3])) for b in betas]
    branch = PuiseuxBranch.from_terms("corpus", n, terms)
    assert branch.invariants().mu == mu
    tree = build_jet_tree(ramified_lift([branch]))
    assert virtual_multiplicities(tree) == (mu, mu)
