"""
folbound: exact certification of multiplicity and degree bounds for
invariant curves of holomorphic foliations in the plane.
"""

from .algebra import BiPoly, CycloField, CycloNum, USeries
from .blowup import BlowupEngine, ResolutionTree, follow_branch, resolve_curve, transform_foliation
from .branch import (
    BranchGerm,
    PuiseuxBranch,
    branch_invariants,
    implicitize,
    intersection_multiplicity,
    ramified_lift,
    reduced_equation,
)
from .casefile import CaseFile, load_case, parse_case
from .errors import FolboundError
from .foliation import VectorField
from .indices import (
    component_index_sums,
    hertling_check,
    multiplicity_foliation,
    tangency_order,
    vanishing_order,
    z_recursion_check,
)
from .jets import build_jet_tree, package_subcurve, virtual_multiplicities
from .poincare import GlobalInstance, SingularPoint, degree_bound_verdict, euler_characteristic, poincare_hopf_check
from .theorems import (
    TheoremReport,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    virtual_bound_check,
    weak_isolation,
    weak_isolation_blowup_property,
)

__version__ = "0.1.0"

__all__ = [
    "BiPoly",
    "CycloField",
    "CycloNum",
    "USeries",
    "BlowupEngine",
    "ResolutionTree",
    "follow_branch",
    "resolve_curve",
    "transform_foliation",
    "BranchGerm",
    "PuiseuxBranch",
    "branch_invariants",
    "implicitize",
    "intersection_multiplicity",
    "ramified_lift",
    "reduced_equation",
    "CaseFile",
    "load_case",
    "parse_case",
    "FolboundError",
    "VectorField",
    "component_index_sums",
    "hertling_check",
    "multiplicity_foliation",
    "tangency_order",
    "vanishing_order",
    "z_recursion_check",
    "build_jet_tree",
    "package_subcurve",
    "virtual_multiplicities",
    "GlobalInstance",
    "SingularPoint",
    "degree_bound_verdict",
    "euler_characteristic",
    "poincare_hopf_check",
    "TheoremReport",
    "check_theorem1",
    "check_theorem2",
    "check_theorem3",
    "virtual_bound_check",
    "weak_isolation",
    "weak_isolation_blowup_property",
]
