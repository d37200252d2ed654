"""
Pytest configuration file with shared fixtures.
"""

import os
import json
from fractions import Fraction

import pytest
from unittest.mock import patch

# Add the parent directory to the path so we can import the folbound package
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from folbound.algebra import BiPoly, USeries
from folbound.branch import PuiseuxBranch
from folbound.foliation import VectorField

CASES_DIR = os.path.join(os.path.dirname(__file__), 'cases')
SAMPLES_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), '..', 'cases'))


def load_case_text(filename):
    """
    Load a case file from the tests/cases directory as text.
    """
    with open(os.path.join(CASES_DIR, filename), 'r', encoding='utf-8') as f:
        return f.read()


def load_case_data(filename):
    """
    Load a case file from the tests/cases directory as parsed JSON.
    """
    return json.loads(load_case_text(filename))


def poly(*terms):
    """Build a BiPoly from (i, j, coefficient) triples."""
    return BiPoly.from_list(terms)


def field(a_terms, b_terms):
    """Build a vector field a ∂x + b ∂y from two lists of (i, j, coefficient) triples."""
    return VectorField(BiPoly.from_list(a_terms), BiPoly.from_list(b_terms))


@pytest.fixture
def clean_env():
    """
    Remove folbound settings from the environment for the duration of a test.
    """
    keys = ["LOG_LEVEL", "FOLBOUND_LOG_FILE", "FOLBOUND_MAX_ORDER", "FOLBOUND_PRECISION", "FOLBOUND_WORKERS"]
    saved = {k: os.environ.pop(k) for k in keys if k in os.environ}
    try:
        yield
    finally:
        for k in keys:
            os.environ.pop(k, None)
        os.environ.update(saved)


@pytest.fixture
def mock_env_vars():
    """
    Mock environment variables with a small precision cap.
    """
    with patch.dict(os.environ, {
        "LOG_LEVEL": "DEBUG",
        "FOLBOUND_MAX_ORDER": "64",
        "FOLBOUND_PRECISION": "8",
        "FOLBOUND_WORKERS": "2",
    }):
        yield


@pytest.fixture
def cusp():
    """
    The cusp y² = x³ as the branch (t², t³).
    """
    return PuiseuxBranch.from_terms("gamma", 2, [(3, 1)])


@pytest.fixture
def cusp_equation():
    """
    y² - x³.
    """
    return poly((0, 2, 1), (3, 0, -1))


@pytest.fixture
def cusp_hamiltonian(cusp_equation):
    """
    The hamiltonian 2y ∂x + 3x² ∂y of the cusp.
    """
    return VectorField.hamiltonian(cusp_equation)


@pytest.fixture
def weighted_field():
    """
    2x ∂x + 3y ∂y, tangent to the cusp but not its hamiltonian.
    """
    return field([(1, 0, 2)], [(0, 1, 3)])


@pytest.fixture
def radial():
    """
    The radial field x ∂x + y ∂y.
    """
    return VectorField.radial()


@pytest.fixture
def x_axis():
    """
    The line y = 0.
    """
    return PuiseuxBranch("x_axis", 1, USeries.zero())


@pytest.fixture
def y_axis():
    """
    The line x = 0, written vertically.
    """
    return PuiseuxBranch("y_axis", 1, USeries.zero(), vertical=True)


@pytest.fixture
def diagonal():
    """
    The line y = x.
    """
    return PuiseuxBranch.from_terms("diagonal", 1, [(1, 1)])


@pytest.fixture
def anti_diagonal():
    """
    The line y = -x.
    """
    return PuiseuxBranch.from_terms("anti_diagonal", 1, [(1, -1)])


@pytest.fixture
def genus_two_branch():
    """
    (t⁶, t⁸ + t¹⁰ + t¹¹): two characteristic exponents.
    """
    return PuiseuxBranch.from_terms("gamma2", 6, [(8, 1), (10, 1), (11, 1)])


@pytest.fixture
def four_branch_curve():
    """
    The four-branch curve with 21 smooth lifts: one (3, 4) cusp and three
    multiplicity 6 branches sharing their first characteristic term.
    """
    return [
        PuiseuxBranch.from_terms("gamma1", 3, [(4, 1)]),
        PuiseuxBranch.from_terms("gamma2", 6, [(8, 1), (10, 1), (11, 1)]),
        PuiseuxBranch.from_terms("gamma3", 6, [(8, 1), (10, 1), (11, 1), (13, 1)]),
        PuiseuxBranch.from_terms("gamma4", 6, [(8, 1), (10, 1), (11, 1), (13, -1)]),
    ]


@pytest.fixture
def cusp_cubic():
    """
    y²(1 + x + y) = x³ with an affine field of degree 1 leaving it invariant.
    """
    f = poly((0, 2, 1), (1, 2, 1), (0, 3, 1), (3, 0, -1))
    vf = field(
        [(1, 0, 2), (2, 0, 2), (1, 1, 3)],
        [(0, 1, 3), (1, 1, 2), (0, 2, 3)],
    )
    branch = PuiseuxBranch.from_terms(
        "cusp",
        2,
        [(3, 1), (5, Fraction(-1, 2)), (6, Fraction(-1, 2)), (7, Fraction(3, 8))],
        known_order=7,
    )
    return f, vf, branch
