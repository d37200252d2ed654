"""
Tests for local indices: multiplicities, vanishing and tangency orders, κ sums and Hertling's identity.
"""

import pytest

from folbound.algebra import BiPoly, USeries
from folbound.blowup import BlowupEngine
from folbound.branch import PuiseuxBranch, reduced_equation
from folbound.errors import InvariantCurve, NotInvariant
from folbound.foliation import VectorField
from folbound.indices import (
    component_index_sums,
    generalized_curve_check,
    hertling_check,
    multiplicity_foliation,
    point_kappa,
    require_invariant,
    tangency_order,
    vanishing_order,
    z_recursion_check,
)

from tests.conftest import field, poly


def _weighted(p):
    return field([(1, 0, 2)], [(0, 1, p)])


def _cusp(p):
    return PuiseuxBranch.from_terms(f"cusp{p}", 2, [(p, 1)])


def _hamiltonian(p):
    return VectorField.hamiltonian(poly((0, 2, 1), (p, 0, -1)))


def test_multiplicity_of_foliations(radial):
    """Test ν_0 for a linear and a nilpotent field."""
    assert multiplicity_foliation(radial) == 1
    assert multiplicity_foliation(field([(0, 1, 2)], [(4, 0, 5)])) == 1
    assert multiplicity_foliation(field([(2, 0, 1)], [(0, 3, 1)])) == 2


@pytest.mark.parametrize("p", [3, 5, 7])
def test_vanishing_orders_on_weighted_cusps(p):
    """Test Z = 1 for 2x ∂x + p y ∂y and Z = p - 1 for the hamiltonian along (t², t^p)."""
    branch = _cusp(p)
    assert vanishing_order(_weighted(p), branch) == 1
    assert vanishing_order(_hamiltonian(p), branch) == p - 1


def test_vanishing_order_of_radial_on_line(radial, x_axis):
    """Test Z(radial, y = 0) = 1."""
    assert vanishing_order(radial, x_axis) == 1


def test_vanishing_order_requires_invariance():
    """Test that ∂x along a parabola is refused."""
    dx = VectorField(BiPoly.constant(1), BiPoly())
    parabola = PuiseuxBranch.from_terms("parabola", 1, [(2, 1)])
    with pytest.raises(NotInvariant):
        vanishing_order(dx, parabola)
    with pytest.raises(NotInvariant):
        require_invariant(dx, [parabola])


def test_tangency_orders(radial, y_axis):
    """Test tang for non-invariant curves."""
    parabola = PuiseuxBranch.from_terms("parabola", 1, [(2, 1)])
    assert tangency_order(radial, parabola) == 2
    dx = VectorField(BiPoly.constant(1), BiPoly())
    assert tangency_order(dx, y_axis) == 0
    for k in (2, 3, 4):
        curve = PuiseuxBranch.from_terms(f"y=x^{k}", 1, [(k, 1)])
        assert tangency_order(dx, curve) == k - 1


def test_tangency_of_invariant_curve(radial, x_axis):
    """Test that tang is undefined on invariant curves."""
    with pytest.raises(InvariantCurve):
        tangency_order(radial, x_axis)


def test_point_kappa():
    """Test κ at simple points and at invariant corners."""
    assert point_kappa(3, invariant=True) == 3
    assert point_kappa(3, invariant=True, corner_both_invariant=True) == 2
    assert point_kappa(2, invariant=False, corner_both_invariant=True) == 2


def test_component_sums_for_cusp_hamiltonian(cusp, cusp_hamiltonian):
    """Test the balance on D_1 and the weighted κ total."""
    tree = BlowupEngine([cusp.germ()], field=cusp_hamiltonian).resolve()
    report = component_index_sums(tree)
    assert report.first_blowup_balance
    assert report.nu == 1
    assert [c.weight for c in report.components] == [1, 1, 2]
    assert all(c.kind == "Z" for c in report.components)
    assert report.weighted_kappa_sum() == 2


def test_component_sums_need_a_field(cusp):
    """Test that curve-only resolutions carry no indices."""
    tree = BlowupEngine([cusp.germ()]).resolve()
    with pytest.raises(ValueError):
        component_index_sums(tree)


def test_hertling_radial_single_blowup(radial):
    """Test 2 = 0 + 1 * (2 - 0) for the radial field."""
    result = hertling_check(radial)
    assert result.lhs == 2
    assert result.kappa_part == 0
    assert result.dicritical_part == 2
    assert result.equal


def test_hertling_linear_field_on_axes(x_axis, y_axis):
    """Test x ∂x + 2y ∂y with the resolution of xy = 0."""
    linear = field([(1, 0, 1)], [(0, 1, 2)])
    result = hertling_check(linear, germs=[x_axis.germ(), y_axis.germ()])
    assert (result.lhs, result.rhs) == (2, 2)


def test_hertling_cusp_hamiltonian(cusp, cusp_hamiltonian):
    """Test the identity across the three blow-ups of the cusp."""
    result = hertling_check(cusp_hamiltonian, germs=[cusp.germ()])
    assert result.lhs == 2
    assert result.equal
    assert result.dicritical_part == 0


@pytest.mark.parametrize("p", [3, 5, 7])
def test_hertling_weighted_fields(p):
    """Test the identity when the resolution ends on a dicritical component."""
    result = hertling_check(_weighted(p), germs=[_cusp(p).germ()])
    assert result.equal
    assert result.dicritical_part > 0


def test_z_recursion_along_cusp(cusp, cusp_hamiltonian, weighted_field):
    """Test Z_0 = Σ ν^γ τ + Z at the attachment point."""
    rec = z_recursion_check(cusp_hamiltonian, cusp)
    assert rec.z == 2
    assert rec.terms == [0, 0, 1]
    assert rec.final == 1
    assert rec.equal

    rec = z_recursion_check(weighted_field, cusp)
    assert rec.z == 1
    assert rec.equal


def test_generalized_curve_condition(cusp, cusp_equation):
    """Test ν(H_j) = ν(Γ_j) + m_j - 1 at every center of the cusp."""
    steps = generalized_curve_check(cusp_equation, [cusp])
    assert [(s.nu_field, s.nu_curve, s.divisor_components) for s in steps] == [(1, 2, 0), (1, 1, 1), (2, 1, 2)]
    assert all(s.holds for s in steps)


def _line(name, slope):
    return PuiseuxBranch.from_terms(name, 1, [(1, slope)])


def _x_axis():
    return PuiseuxBranch("x_axis", 1, USeries.zero())


def _y_axis():
    return PuiseuxBranch("y_axis", 1, USeries.zero(), vertical=True)


HAMILTONIAN_CURVES = {
    "node": lambda: [_x_axis(), _y_axis()],
    "three_lines": lambda: [_x_axis(), _y_axis(), _line("diagonal", 1)],
    "four_lines": lambda: [_x_axis(), _y_axis(), _line("diagonal", 1), _line("anti_diagonal", -1)],
    "cusp": lambda: [PuiseuxBranch.from_terms("gamma", 2, [(3, 1)])],
    "cusp_2_5": lambda: [PuiseuxBranch.from_terms("gamma", 2, [(5, 1)])],
    "e6": lambda: [PuiseuxBranch.from_terms("gamma", 3, [(4, 1)])],
    "e8": lambda: [PuiseuxBranch.from_terms("gamma", 3, [(5, 1)])],
    "cusp_and_tangent": lambda: [PuiseuxBranch.from_terms("gamma", 2, [(3, 1)]), _x_axis()],
    "tacnode": lambda: [_x_axis(), PuiseuxBranch.from_terms("parabola", 1, [(2, 1)])],
    "two_cusps": lambda: [
        PuiseuxBranch.from_terms("gamma", 2, [(3, 1)]),
        PuiseuxBranch.from_terms("perturbed", 2, [(3, 1), (4, 1)]),
    ],
    "genus_two": lambda: [PuiseuxBranch.from_terms("gamma2", 6, [(8, 1), (10, 1), (11, 1)])],
}


@pytest.mark.parametrize("name", sorted(HAMILTONIAN_CURVES))
def test_hertling_identity_for_hamiltonians(name):
    """Test ν + 1 = Σ w κ with no dicritical part for the hamiltonian of a reduced curve."""
    branches = HAMILTONIAN_CURVES[name]()
    hamiltonian = VectorField.hamiltonian(reduced_equation(branches))
    result = hertling_check(hamiltonian, germs=[b.germ() for b in branches])
    assert result.equal
    assert result.lhs == hamiltonian.multiplicity() + 1
    assert result.dicritical_part == 0


def test_hertling_identity_for_four_branch_hamiltonian(four_branch_curve):
    """Test the identity for the hamiltonian of the four-branch curve, whose ν is 20."""
    hamiltonian = VectorField.hamiltonian(reduced_equation(four_branch_curve))
    result = hertling_check(hamiltonian, germs=[b.germ() for b in four_branch_curve])
    assert hamiltonian.multiplicity() == 20
    assert (result.lhs, result.rhs) == (21, 21)
    assert result.dicritical_part == 0


@pytest.mark.parametrize("name", sorted(HAMILTONIAN_CURVES))
def test_generalized_curve_condition_on_corpus(name):
    """Test ν(H_j) = ν(Γ_j) + m_j - 1 at every center for each curve of the corpus."""
    branches = HAMILTONIAN_CURVES[name]()
    steps = generalized_curve_check(reduced_equation(branches), branches)
    assert steps
    assert all(s.holds for s in steps)
    assert steps[0].nu_curve == sum(b.multiplicity for b in branches)
