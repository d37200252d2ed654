"""
Local indices of a foliation along curves and exceptional divisors.

ν (multiplicity), Z (vanishing order along an invariant branch), tang
(tangency order with a non-invariant branch) and Hertling's κ, together with
the exact per-component sums that enter Hertling's formula.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .algebra import BiPoly, poly_eval_series
from .blowup import BlowupEngine, ResolutionTree, follow_branch
from .branch import BranchGerm, PuiseuxBranch, implicitize
from .errors import ConsistencyError, InvariantCurve, NotInvariant, OrderBeyondTruncation, TruncationInsufficient
from .foliation import VectorField, germ_is_invariant, pullback_coefficient
from .utils.env_loader import initial_precision
from .utils.logger import get_logger

logger = get_logger(__name__)


def multiplicity_foliation(field: VectorField) -> int:
    """ν_0(F) = min(ν_0(a), ν_0(b))."""
    return field.multiplicity()


def germ_vanishing_order(field: VectorField, germ: BranchGerm, precision: Optional[int] = None) -> int:
    """Z of the field along an invariant germ."""
    h = pullback_coefficient(field, germ, precision or initial_precision())
    try:
        return int(h.order())
    except OrderBeyondTruncation as e:
        raise TruncationInsufficient(f"Z along {germ.name}: {e}") from e


def vanishing_order(field: VectorField, branch: PuiseuxBranch, precision: Optional[int] = None) -> int:
    """
    Z_0(F, γ): order of the pulled back field α*X = h(t) ∂/∂t.

    Raises:
        NotInvariant: If X is not tangent to γ
    """
    return germ_vanishing_order(field, branch.germ(), precision)


def tangency_order(field: VectorField, branch: PuiseuxBranch) -> int:
    """
    tang_0(F, γ) = ord_t X(f)(α(t)) for the implicit equation f of γ.

    Raises:
        InvariantCurve: If X(f) vanishes identically along γ
    """
    f = implicitize(branch)
    value = poly_eval_series(field.apply(f), branch.x_series(), branch.y_series())
    if value.is_zero():
        raise InvariantCurve(f"branch {branch.name} is invariant; tang is undefined")
    return int(value.order())


def point_kappa(z_or_tang: int, invariant: bool, corner_both_invariant: bool = False) -> int:
    """κ at one point of a component: Z - 1 at a corner of two invariant components, else Z or tang."""
    if invariant and corner_both_invariant:
        return z_or_tang - 1
    return z_or_tang


# ----------------------------------------------------------------------------
# Per-component sums
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentIndex:
    comp_id: int
    weight: int
    invariant: bool
    kind: str
    initial_sum: int
    index_sum: int
    invariant_corners: int
    kappa_sum: int
    valence: int

    def as_dict(self) -> Dict[str, object]:
        return {
            "component": self.comp_id,
            "weight": self.weight,
            "invariant": self.invariant,
            "kind": self.kind,
            "initial_sum": self.initial_sum,
            "index_sum": self.index_sum,
            "invariant_corners": self.invariant_corners,
            "kappa_sum": self.kappa_sum,
            "valence": self.valence,
        }


@dataclass(frozen=True)
class IndexReport:
    components: List[ComponentIndex]
    attachment_kappas: Dict[str, Optional[int]]
    first_blowup_balance: bool
    nu: int

    def component(self, comp_id: int) -> ComponentIndex:
        return next(c for c in self.components if c.comp_id == comp_id)

    def weighted_kappa_sum(self) -> int:
        return sum(c.weight * c.kappa_sum for c in self.components)

    def as_dict(self) -> Dict[str, object]:
        return {
            "nu": self.nu,
            "first_blowup_balance": self.first_blowup_balance,
            "components": [c.as_dict() for c in self.components],
            "attachment_kappas": dict(self.attachment_kappas),
        }


def _require_field(tree: ResolutionTree):
    if not tree.has_field:
        raise ValueError("index computations need a resolution carrying a vector field")


def component_index_sums(tree: ResolutionTree) -> IndexReport:
    """
    Exact Z/tang sums and κ sums for every exceptional component.

    The sums are degrees of restricted polynomials, corrected at every later
    center lying on the component; no root is ever isolated.
    """
    _require_field(tree)
    comps = []
    for cid, comp in sorted(tree.components.items()):
        corners = tree.invariant_valence(cid) if comp.invariant else 0
        comps.append(
            ComponentIndex(
                comp_id=cid,
                weight=comp.weight,
                invariant=bool(comp.invariant),
                kind="Z" if comp.invariant else "tang",
                initial_sum=comp.initial_sum,
                index_sum=comp.index_sum,
                invariant_corners=corners,
                kappa_sum=tree.kappa_sum(cid),
                valence=tree.invariant_valence(cid),
            )
        )
    root = tree.centers[0]
    first = tree.components[1].initial_sum
    balance = root.nu == (first + 1 if root.dicritical else first - 1)
    return IndexReport(
        components=comps,
        attachment_kappas={name: att.kappa for name, att in tree.attachments.items()},
        first_blowup_balance=balance,
        nu=root.nu,
    )


@dataclass(frozen=True)
class HertlingResult:
    lhs: int
    rhs: int
    kappa_part: int
    dicritical_part: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    def as_dict(self) -> Dict[str, object]:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "kappa_part": self.kappa_part,
            "dicritical_part": self.dicritical_part,
            "equal": self.equal,
        }


def hertling_terms(tree: ResolutionTree) -> HertlingResult:
    _require_field(tree)
    kappa_part = sum(comp.weight * tree.kappa_sum(cid) for cid, comp in tree.components.items())
    dicritical_part = sum(
        tree.components[cid].weight * (2 - tree.invariant_valence(cid)) for cid in tree.dicritical_components()
    )
    return HertlingResult(
        lhs=tree.centers[0].nu + 1,
        rhs=kappa_part + dicritical_part,
        kappa_part=kappa_part,
        dicritical_part=dicritical_part,
    )


def hertling_check(
    field: VectorField,
    tree: Optional[ResolutionTree] = None,
    germs: Sequence[BranchGerm] = (),
) -> HertlingResult:
    """
    Both sides of ν_0(F) + 1 = Σ w κ + Σ_dicritical w (2 - v).

    Args:
        field: The foliation
        tree: A resolution carrying ``field``; built from ``germs`` if omitted
        germs: Curve germs whose resolution fixes the blow-up sequence
    """
    if tree is None:
        tree = BlowupEngine(germs, field=field).resolve()
    result = hertling_terms(tree)
    logger.debug(f"Hertling: lhs={result.lhs} rhs={result.rhs}")
    return result


@dataclass(frozen=True)
class ZRecursion:
    z: int
    terms: List[int]
    final: int

    @property
    def total(self) -> int:
        return sum(self.terms) + self.final

    @property
    def equal(self) -> bool:
        return self.z == self.total

    def as_dict(self) -> Dict[str, object]:
        return {"z": self.z, "terms": list(self.terms), "final": self.final, "total": self.total, "equal": self.equal}


def z_recursion_check(
    field: VectorField,
    branch: PuiseuxBranch,
    tree: Optional[ResolutionTree] = None,
) -> ZRecursion:
    """
    Compare Z_0(F, γ) with Σ ν_j^γ τ_j + Z_{P_k}(F_k, γ_k).
    """
    if tree is None or not tree.has_field or branch.name not in tree.attachments:
        tree = BlowupEngine([branch.germ()], field=field).resolve()
    steps = follow_branch(field, branch, tree)
    z = vanishing_order(field, branch, tree.precision)
    att = tree.attachments[branch.name]
    final = germ_vanishing_order(att.field, att.local_germ, tree.precision)
    return ZRecursion(z=z, terms=[s.nu_branch * s.tau for s in steps], final=final)


@dataclass(frozen=True)
class GeneralizedCurveStep:
    center: int
    nu_field: int
    nu_curve: int
    divisor_components: int

    @property
    def holds(self) -> bool:
        return self.nu_field == self.nu_curve + self.divisor_components - 1


def generalized_curve_check(
    f: BiPoly,
    branches: Sequence[PuiseuxBranch],
    tree: Optional[ResolutionTree] = None,
) -> List[GeneralizedCurveStep]:
    """
    For the hamiltonian H of f: ν_{P_j}(H_j) = ν_{P_j}(Γ_j) + m_j - 1 at every center,
    m_j being the number of exceptional components through P_j.
    """
    h = VectorField.hamiltonian(f)
    if tree is None:
        tree = BlowupEngine([b.germ() for b in branches], field=h).resolve()
    steps = []
    for c in tree.centers:
        steps.append(
            GeneralizedCurveStep(
                center=c.center_id,
                nu_field=c.nu,
                nu_curve=c.total_multiplicity,
                divisor_components=len(c.axes),
            )
        )
        if c.dicritical:
            raise ConsistencyError(f"hamiltonian field is dicritical at P_{c.center_id}")
    return steps


def invariance_report(field: VectorField, branches: Sequence[PuiseuxBranch]) -> Dict[str, bool]:
    return {b.name: germ_is_invariant(field, b.germ()) for b in branches}


def require_invariant(field: VectorField, branches: Sequence[PuiseuxBranch]):
    for name, ok in invariance_report(field, branches).items():
        if not ok:
            raise NotInvariant(f"branch {name} is not invariant by {field}")
