"""
Certification of the local bounds and their proof diagnostics.

Every check returns a TheoremReport: the inequality of the statement plus a
list of BoundCheck entries for the auxiliary identities and intermediate bounds that
were verified on the way. Checks whose validity depends on weak isolation are
marked as not asserted when that hypothesis fails.
"""

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from .algebra import USeries, exact_number, format_scalar
from .blowup import BlowupEngine, ResolutionTree
from .branch import BranchGerm, PuiseuxBranch, ramified_lift, reduced_equation
from .errors import (
    ConsistencyError,
    NotInvariant,
    NotWeaklyIsolated,
    OrderBeyondTruncation,
    SingularityRequired,
    TruncationInsufficient,
)
from .foliation import VectorField, blowup_germ, germ_is_invariant
from .indices import germ_vanishing_order, hertling_terms, require_invariant
from .jets import build_jet_tree
from .utils.logger import get_logger

logger = get_logger(__name__)

Number = Union[int, Fraction]


@dataclass(frozen=True)
class BoundCheck:
    """One verified relation value >= bound (or value == bound)."""

    name: str
    value: Number
    bound: Number
    relation: str = ">="
    where: str = ""
    asserted: bool = True

    @property
    def holds(self) -> bool:
        if self.relation == "==":
            return self.value == self.bound
        return self.value >= self.bound

    def as_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "where": self.where,
            "value": exact_number(self.value),
            "relation": self.relation,
            "bound": exact_number(self.bound),
            "holds": self.holds,
            "asserted": self.asserted,
        }


@dataclass
class TheoremReport:
    """
    Outcome of one theorem check.

    ``lhs >= rhs`` is the statement; ``checks`` collects everything verified
    along the way. A vacuous report is one whose hypotheses exclude the case.
    """

    theorem: str
    statement: str
    lhs: Number
    rhs: Number
    quantities: Dict[str, object] = dc_field(default_factory=dict)
    checks: List[BoundCheck] = dc_field(default_factory=list)
    hypothesis_met: bool = True
    vacuous: bool = False
    diagnostics: Optional["ProofDiagnostics"] = None

    @property
    def verdict(self) -> bool:
        return self.vacuous or self.lhs >= self.rhs

    @property
    def failed_checks(self) -> List[BoundCheck]:
        return [c for c in self.checks if c.asserted and not c.holds]

    @property
    def passed(self) -> bool:
        return self.verdict and not self.failed_checks

    def as_dict(self) -> Dict[str, object]:
        out = {
            "theorem": self.theorem,
            "statement": self.statement,
            "lhs": exact_number(self.lhs),
            "rhs": exact_number(self.rhs),
            "verdict": "pass" if self.passed else "fail",
            "hypothesis_met": self.hypothesis_met,
            "vacuous": self.vacuous,
            "quantities": {k: exact_number(v) if isinstance(v, (int, Fraction)) else v for k, v in self.quantities.items()},
            "checks": [c.as_dict() for c in self.checks],
        }
        if self.diagnostics is not None:
            out["diagnostics"] = self.diagnostics.as_dict()
        return out


def _germs(branches: Sequence[PuiseuxBranch]) -> List[BranchGerm]:
    return [b.germ() for b in branches]


def _total_multiplicity(germs: Sequence[BranchGerm]) -> int:
    return sum(g.multiplicity() for g in germs)


# ----------------------------------------------------------------------------
# Theorem 1 and the refined bound through the ramification
# ----------------------------------------------------------------------------

def check_theorem1(field: VectorField, branches: Sequence[PuiseuxBranch], refined: bool = True) -> TheoremReport:
    """
    ν_0(F) ≥ max(μ_T(Γ), μ_D(Γ)/2), and the refined bound N + Σ_H (max(c_H, 1) - 1).

    The refined bound transports τ*F along the jet tree with the blow-up
    engine: N counts dicritical components of E_τ, H runs over connected
    unions of invariant components and c_H counts the lifted branches
    attached to H.

    Raises:
        NotInvariant: If a branch is not invariant by the field
        SingularityRequired: If Γ is a single smooth branch
    """
    require_invariant(field, branches)
    lifted = ramified_lift(branches)
    jet_tree = build_jet_tree(lifted)
    nu = field.multiplicity()
    mu_t, mu_d = jet_tree.mu_T, jet_tree.mu_D
    geometric = max(Fraction(mu_t), Fraction(mu_d, 2))
    report = TheoremReport(
        theorem="theorem1",
        statement="nu_0(F) >= max(mu_T, mu_D/2)",
        lhs=nu,
        rhs=geometric,
        quantities={
            "nu_F": nu,
            "mu_T": mu_t,
            "mu_D": mu_d,
            "ramification": lifted.ramification,
            "jet_nodes": len(jet_tree),
        },
    )
    if refined:
        _refined_bound(field, lifted, jet_tree, report)
    logger.info(f"Theorem 1: nu={nu}, mu_T={mu_t}, mu_D={mu_d}, verdict={report.passed}")
    return report


def _refined_bound(field, lifted, jet_tree, report: TheoremReport):
    n = lifted.ramification
    ramified = field.ramified(n)
    nu = report.lhs
    if ramified.multiplicity() != nu:
        logger.warning(f"nu of the ramified field is {ramified.multiplicity()}, nu(F) is {nu}")
    germs = [
        BranchGerm(lift.label, USeries.monomial(1, 1), lift.series)
        for lift in lifted
    ]
    tree = BlowupEngine(germs, field=ramified).resolve()

    engine_shape = sorted((len(tree.ancestors(c.center_id)) - 1, c.total_multiplicity) for c in tree.centers)
    jet_shape = sorted((node.order, len(node.fiber)) for node in jet_tree.nodes)
    if engine_shape != jet_shape:
        raise ConsistencyError(f"blow-up centers {engine_shape} differ from jet nodes {jet_shape}")

    invariant = tree.invariant_components()
    dicritical = tree.dicritical_components()
    sub = tree.dual.subgraph(invariant)
    groups = [sorted(h) for h in nx.connected_components(sub)]
    attached: Dict[int, int] = {}
    for att in tree.attachments.values():
        attached[att.component] = attached.get(att.component, 0) + 1

    bound = len(dicritical)
    per_h = []
    for h in sorted(groups):
        c_h = sum(attached.get(cid, 0) for cid in h)
        kappa = sum(tree.kappa_sum(cid) for cid in h)
        bound += max(c_h, 1) - 1
        per_h.append({"components": h, "c_H": c_h, "kappa": kappa})
        where = f"H={h}"
        report.checks.append(BoundCheck("kappa over H >= c_H", kappa, c_h, where=where))
        report.checks.append(BoundCheck("kappa over H >= 1", kappa, 1, where=where))

    hertling = hertling_terms(tree)
    report.checks.extend(
        [
            BoundCheck("Hertling identity for the ramified field", hertling.rhs, hertling.lhs, relation="=="),
            BoundCheck("nu_0(F) >= refined bound", nu, bound),
            BoundCheck("refined bound >= max(mu_T, mu_D/2)", bound, report.rhs),
        ]
    )
    for comp in tree.components.values():
        if comp.weight != 1:
            raise ConsistencyError(f"component D_{comp.comp_id} of the ramified resolution has weight {comp.weight}")
    report.quantities.update(
        {
            "nu_ramified": ramified.multiplicity(),
            "N": len(dicritical),
            "refined_bound": bound,
            "invariant_groups": per_h,
        }
    )


# ----------------------------------------------------------------------------
# Weak isolation
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class AttachmentKappa:
    germ: str
    point: str
    component: int
    component_invariant: bool
    kappa: int
    smooth: bool

    @property
    def null(self) -> bool:
        return self.kappa == 0

    def as_dict(self) -> Dict[str, object]:
        return {
            "germ": self.germ,
            "point": self.point,
            "component": self.component,
            "component_invariant": self.component_invariant,
            "kappa": self.kappa,
            "null": self.null,
            "smooth": self.smooth,
        }


@dataclass
class WeakIsolationReport:
    """κ at every attachment point and the decomposition Γ̂ = Γ ∪ Γ̄."""

    entries: List[AttachmentKappa]
    nulls: List[str]
    gamma: List[str]
    gamma_bar: List[str]
    normal_crossings: bool
    admissible: int
    tree: Optional[ResolutionTree] = dc_field(default=None, repr=False, compare=False)

    @property
    def verdict(self) -> bool:
        return self.normal_crossings

    def entry(self, name: str) -> AttachmentKappa:
        return next(e for e in self.entries if e.germ == name)

    def as_dict(self) -> Dict[str, object]:
        return {
            "weakly_isolated": self.verdict,
            "attachments": [e.as_dict() for e in self.entries],
            "nulls": list(self.nulls),
            "gamma": list(self.gamma),
            "gamma_bar": list(self.gamma_bar),
            "normal_crossings": self.normal_crossings,
            "admissible_choices": self.admissible,
        }


def _tangent(germ: BranchGerm) -> Tuple:
    try:
        return germ.x.coefficient(1), germ.y.coefficient(1)
    except OrderBeyondTruncation as e:
        raise TruncationInsufficient(f"tangent of {germ.name}: {e}") from e


def _transverse(a: BranchGerm, b: BranchGerm) -> bool:
    (xa, ya), (xb, yb) = _tangent(a), _tangent(b)
    return bool(xa * yb - ya * xb)


def _normal_crossings(germs: Sequence[BranchGerm]) -> bool:
    """Zero, one or two smooth germs, transverse when there are two."""
    if len(germs) > 2:
        return False
    if any(g.multiplicity() != 1 for g in germs):
        return False
    return len(germs) < 2 or _transverse(germs[0], germs[1])


def weak_isolation_germs(field: VectorField, germs: Sequence[BranchGerm]) -> WeakIsolationReport:
    """Weak isolation of the union of invariant germs through the origin."""
    if len(germs) < 2 and all(g.multiplicity() == 1 for g in germs):
        raise SingularityRequired("weak isolation is defined for singular curves")
    for g in germs:
        if not germ_is_invariant(field, g):
            raise NotInvariant(f"germ {g.name} is not invariant by {field}")
    tree = BlowupEngine(germs, field=field).resolve()
    by_name = {g.name: g for g in germs}
    entries = []
    for g in germs:
        att = tree.attachments[g.name]
        entries.append(
            AttachmentKappa(
                germ=g.name,
                point="P_{}/{}/{}".format(*att.point_key),
                component=att.component,
                component_invariant=bool(tree.components[att.component].invariant),
                kappa=att.kappa,
                smooth=g.multiplicity() == 1,
            )
        )
    nulls = [e.germ for e in entries if e.null]
    null_germs = [by_name[n] for n in nulls]
    crossing = _normal_crossings(null_germs)

    admissible = 0
    if crossing:
        others = [e.germ for e in entries if not e.null and e.smooth]
        for extra in range(0, 3 - len(nulls)):
            for chosen in itertools.combinations(others, extra):
                if _normal_crossings(null_germs + [by_name[c] for c in chosen]):
                    admissible += 1
        if admissible > 1:
            logger.info(f"{admissible} admissible choices of the discardable part; reporting the null set")

    report = WeakIsolationReport(
        entries=entries,
        nulls=nulls,
        gamma=[e.germ for e in entries if not e.null],
        gamma_bar=nulls if crossing else [],
        normal_crossings=crossing,
        admissible=admissible,
        tree=tree,
    )
    logger.debug(f"Weak isolation: nulls={nulls}, normal crossings={crossing}")
    return report


def weak_isolation(field: VectorField, branches: Sequence[PuiseuxBranch]) -> WeakIsolationReport:
    """
    Resolve Γ̂, transport F and decide weak isolation.

    Null branches (κ = 0 at their attachment point) are forced into Γ̄; the
    curve is weakly isolated iff the nulls form a normal-crossings divisor.
    """
    return weak_isolation_germs(field, _germs(branches))


def _require_weak_isolation(field, branches, required: bool) -> WeakIsolationReport:
    wi = weak_isolation(field, branches)
    if not wi.verdict and required:
        raise NotWeaklyIsolated(f"null branches {wi.nulls} do not form a normal-crossings divisor")
    if not wi.verdict:
        logger.warning(f"Curve is not weakly isolated (nulls {wi.nulls}); intermediate bounds are reported only")
    return wi


# ----------------------------------------------------------------------------
# Theorem 2: separating centers and the E_l decomposition
# ----------------------------------------------------------------------------

@dataclass
class SeparationDiagnostics:
    separating_centers: List[int]
    partition: Dict[int, List[int]]
    bar_component: Dict[int, Optional[int]]
    delta: Dict[int, int]
    ancestor_valence: Dict[int, int]
    epsilon: Dict[int, int]
    attached: Dict[int, Dict[str, List[str]]]

    def as_dict(self) -> Dict[str, object]:
        return {
            "separating_centers": list(self.separating_centers),
            "partition": {str(l): comps for l, comps in self.partition.items()},
            "bar_component": {str(l): c for l, c in self.bar_component.items()},
            "delta": {str(l): d for l, d in self.delta.items()},
            "ancestor_valence": {str(c): v for c, v in self.ancestor_valence.items()},
            "epsilon": {str(l): e for l, e in self.epsilon.items()},
            "attached": {str(l): a for l, a in self.attached.items()},
        }


def _is_separating(tree: ResolutionTree, center_id: int) -> bool:
    center = tree.centers[center_id]
    if center_id == 0:
        return True
    if len(center.axes) != 1:
        return False
    (comp,) = center.axes.values()
    return tree.components[comp].invariant is False


def separation_diagnostics(
    tree: ResolutionTree,
    wi: WeakIsolationReport,
    germs: Sequence[BranchGerm],
    asserted: bool = True,
) -> Tuple[SeparationDiagnostics, List[BoundCheck]]:
    """
    Separating centers, the partition of E_k into the sets 𝒟_l and the
    controllable parts ℰ_l of Hertling's formula.
    """
    separating = [c.center_id for c in tree.centers if _is_separating(tree, c.center_id)]
    owner: Dict[int, int] = {}
    partition: Dict[int, List[int]] = {l: [] for l in separating}
    for c in tree.centers:
        chain = tree.ancestors(c.center_id)
        l = next(a for a in reversed(chain) if a in partition)
        owner[c.created] = l
        partition[l].append(c.created)

    def w_at(l: int) -> int:
        if l == 0:
            return 1
        (comp,) = tree.centers[l].axes.values()
        return tree.components[comp].weight

    bar: Dict[int, Optional[int]] = {0: None}
    delta: Dict[int, int] = {0: 1}
    for l in separating[1:]:
        (home,) = tree.centers[l].axes.values()
        meeting = [c for c in tree.neighbors(home) if owner.get(c) == l]
        if len(meeting) != 1:
            raise ConsistencyError(f"separating center P_{l}: {len(meeting)} components of its part meet D_{home}")
        bar[l] = meeting[0]
        delta[l] = 1 if tree.components[meeting[0]].invariant else 0

    va: Dict[int, int] = {}
    for cid in tree.dicritical_components():
        subtract = sum(delta[l] for l in separating[1:] if list(tree.centers[l].axes.values()) == [cid])
        va[cid] = tree.invariant_valence(cid) - subtract

    epsilon: Dict[int, int] = {}
    for l in separating:
        comps = partition[l]
        total = sum(tree.components[c].weight * tree.kappa_sum(c) for c in comps)
        total -= delta[l] * w_at(l)
        total += sum(tree.components[c].weight * (2 - va[c]) for c in comps if c in va)
        epsilon[l] = total

    by_name = {g.name: g for g in germs}
    attached: Dict[int, Dict[str, List[str]]] = {l: {"non_null": [], "null": []} for l in separating}
    for e in wi.entries:
        attached[owner[e.component]]["null" if e.null else "non_null"].append(e.germ)

    nu = tree.centers[0].nu
    checks = [BoundCheck("sum of E_l equals nu_0(F)", sum(epsilon.values()), nu, relation="==")]
    for e in wi.entries:
        checks.append(
            BoundCheck(
                "branch multiplicity equals attachment weight",
                by_name[e.germ].multiplicity(),
                tree.components[e.component].weight,
                relation="==",
                where=e.germ,
            )
        )
    invariant_groups = [set(h) for h in nx.connected_components(tree.dual.subgraph(tree.invariant_components()))]
    for l in separating:
        where = f"P_{l}"
        comps = partition[l]
        kappa = sum(tree.components[c].weight * tree.kappa_sum(c) for c in comps)
        non_null = sum(by_name[n].multiplicity() for n in attached[l]["non_null"])
        null = sum(by_name[n].multiplicity() for n in attached[l]["null"])
        checks.extend(
            [
                BoundCheck("E_l >= w(D(P_l))", epsilon[l], w_at(l), where=where, asserted=asserted),
                BoundCheck("E_l >= half the attached multiplicity", epsilon[l], Fraction(non_null + null, 2), where=where, asserted=asserted),
                BoundCheck("weighted kappa over D_l >= non-null multiplicity", kappa, non_null, where=where, asserted=asserted),
            ]
        )
        for h in invariant_groups:
            if h <= set(comps):
                value = sum(tree.components[c].weight * tree.kappa_sum(c) for c in h)
                checks.append(
                    BoundCheck("weighted kappa over H >= w(D(P_l))", value, w_at(l), where=f"{where} H={sorted(h)}", asserted=asserted)
                )

    diag = SeparationDiagnostics(
        separating_centers=separating,
        partition=partition,
        bar_component=bar,
        delta=delta,
        ancestor_valence=va,
        epsilon=epsilon,
        attached=attached,
    )
    return diag, checks


def check_theorem2(
    field: VectorField,
    branches: Sequence[PuiseuxBranch],
    require_weak_isolation: bool = True,
) -> TheoremReport:
    """
    2 ν_0(F) ≥ ν_0(Γ̂) for a weakly isolated curve Γ̂.

    Raises:
        NotWeaklyIsolated: If the curve fails the weak isolation check and
            ``require_weak_isolation`` is set
    """
    wi = _require_weak_isolation(field, branches, require_weak_isolation)
    germs = _germs(branches)
    nu = field.multiplicity()
    nu_curve = _total_multiplicity(germs)
    sep, checks = separation_diagnostics(wi.tree, wi, germs, asserted=wi.verdict)
    report = TheoremReport(
        theorem="theorem2",
        statement="2 nu_0(F) >= nu_0(Gamma)",
        lhs=2 * nu,
        rhs=nu_curve,
        quantities={"nu_F": nu, "nu_Gamma": nu_curve},
        checks=checks,
        hypothesis_met=wi.verdict,
        diagnostics=ProofDiagnostics(weak_isolation=wi, separation=sep),
    )
    logger.info(f"Theorem 2: 2*{nu} >= {nu_curve}, verdict={report.passed}")
    return report


# ----------------------------------------------------------------------------
# Theorem 3: vanishing orders along a branch
# ----------------------------------------------------------------------------

@dataclass
class PathDiagnostics:
    """Data of the centers P_0..P_{k-1} of the resolution along γ; P_k is the attachment point."""

    branch: str
    path: List[int]
    nu_branch: List[int]
    nu_curve: List[int]
    tau: List[int]
    nu_hamiltonian: List[int]
    divisor: List[List[int]]
    invariant_divisor: List[List[int]]
    i_one: List[int]
    omega_one: List[int]
    iota: int
    rho: int
    theta: Dict[int, Fraction]
    precursors: List[int]
    leaders: List[int]
    partition_p: List[List[int]]
    partition_p_prime: List[List[int]]
    theta_p: List[Fraction]
    theta_p_prime: List[Fraction]
    z_field_final: int
    z_hamiltonian_final: int

    @property
    def k(self) -> int:
        return len(self.path)

    def as_dict(self) -> Dict[str, object]:
        return {
            "branch": self.branch,
            "path": list(self.path),
            "k": self.k,
            "nu_branch": list(self.nu_branch),
            "nu_curve": list(self.nu_curve),
            "tau": list(self.tau),
            "nu_hamiltonian": list(self.nu_hamiltonian),
            "divisor": [list(d) for d in self.divisor],
            "invariant_divisor": [list(d) for d in self.invariant_divisor],
            "I_1": list(self.i_one),
            "Omega_1": list(self.omega_one),
            "iota": self.iota,
            "rho": self.rho,
            "theta": {str(j): exact_number(t) for j, t in self.theta.items()},
            "precursors": list(self.precursors),
            "leaders": list(self.leaders),
            "partition_P": [list(s) for s in self.partition_p],
            "partition_P_prime": [list(s) for s in self.partition_p_prime],
            "Theta_P": [exact_number(t) for t in self.theta_p],
            "Theta_P_prime": [exact_number(t) for t in self.theta_p_prime],
            "Z_F_final": self.z_field_final,
            "Z_H_final": self.z_hamiltonian_final,
        }


@dataclass
class ProofDiagnostics:
    weak_isolation: WeakIsolationReport
    separation: Optional[SeparationDiagnostics] = None
    path: Optional[PathDiagnostics] = None

    def as_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {"weak_isolation": self.weak_isolation.as_dict()}
        if self.separation is not None:
            out["separation"] = self.separation.as_dict()
        if self.path is not None:
            out["path"] = self.path.as_dict()
        return out


def _runs(domain: Sequence[int], starts: Set[int]) -> List[List[int]]:
    runs: List[List[int]] = []
    for j in domain:
        if j in starts or not runs or runs[-1][-1] != j - 1:
            runs.append([j])
        else:
            runs[-1].append(j)
    return runs


def path_diagnostics(
    tree_f: ResolutionTree,
    tree_h: ResolutionTree,
    name: str,
    asserted: bool = True,
) -> Tuple[PathDiagnostics, List[BoundCheck]]:
    """
    The combinatorics of the resolution along one branch: I_1, Ω_1, ι, ρ,
    θ_j, precursor and leader points, the partitions 𝒫 ⊂ 𝒫′ and their Θ sums.
    """
    if len(tree_f) != len(tree_h) or any(
        a.multiplicities != b.multiplicities for a, b in zip(tree_f.centers, tree_h.centers)
    ):
        raise ConsistencyError("the resolutions carrying F and H differ")
    path = tree_f.germ_path(name)
    k = len(path)
    att_f = tree_f.attachments[name]
    att_h = tree_h.attachments[name]
    centers = [tree_f.centers[c] for c in path]

    nu_g = [c.multiplicities[name] for c in centers] + [1]
    nu_curve = [c.total_multiplicity for c in centers]
    tau = [c.tau for c in centers]
    nu_h = [tree_h.centers[c].nu for c in path]
    divisor = [sorted(c.axes.values()) for c in centers] + [[att_f.component]]
    inv_div = [[d for d in ds if tree_f.components[d].invariant] for ds in divisor]

    def created_invariant(j: int) -> bool:
        return bool(tree_f.components[path[j] + 1].invariant)

    def full(j: int) -> bool:
        return len(inv_div[j]) == len(divisor[j])

    i_one = [j for j in range(k) if nu_curve[j] == 1]
    iota = max((j for j in range(k) if nu_g[j] > 1), default=-1)
    omega = list(i_one) if iota >= 0 and not created_invariant(iota) else []
    rho = min(i_one + [k]) - 1
    domain = [j for j in range(k) if j not in omega]

    theta = {j: tau[j] - Fraction(nu_h[j] - 1, 2) for j in domain}
    precursors = []
    for j in domain:
        non_inv = not created_invariant(j)
        nxt_noninv = [d for d in divisor[j + 1] if not tree_f.components[d].invariant]
        if (
            (non_inv and nu_g[j + 1] < nu_g[j])
            or (non_inv and nxt_noninv == [path[j] + 1])
            or full(j)
        ):
            precursors.append(j)
    leaders = [j for j in precursors if full(j)]
    part_p = _runs(domain, set(precursors))
    part_pp = _runs(domain, set(leaders))

    def big_theta(s: Sequence[int]) -> Fraction:
        return sum((nu_g[m] * theta[m] for m in s), Fraction(0))

    theta_p = [big_theta(s) for s in part_p]
    theta_pp = [big_theta(s) for s in part_pp]

    z_f_final = germ_vanishing_order(att_f.field, att_f.local_germ, tree_f.precision)
    z_h_final = germ_vanishing_order(att_h.field, att_h.local_germ, tree_h.precision)

    checks: List[BoundCheck] = []
    for j in range(k):
        m_j = len(divisor[j])
        checks.append(
            BoundCheck("generalized curve multiplicity", nu_h[j], nu_curve[j] + m_j - 1, relation="==", where=f"j={j}")
        )
    checks.append(BoundCheck("Z_H at the attachment point", z_h_final, 1, relation="==", where=f"P_{k}"))
    if tree_f.components[att_f.component].invariant:
        checks.append(BoundCheck("Z_F at the attachment point", z_f_final, 1, where=f"P_{k}"))
    if omega:
        checks.append(BoundCheck("P_iota is a precursor", int(iota in precursors), 1, relation="==", where=f"j={iota}"))

    for j in domain:
        where = f"j={j}"
        checks.append(BoundCheck("theta_j >= -1", theta[j], -1, where=where, asserted=asserted))
        dicritical = bool(centers[j].dicritical)
        if full(j) and dicritical:
            checks.append(BoundCheck("theta_j >= 1", theta[j], 1, where=where, asserted=asserted))
        elif full(j) or dicritical:
            checks.append(BoundCheck("theta_j >= 0", theta[j], 0, where=where, asserted=asserted))

    for s, value in zip(part_p, theta_p):
        j, r = s[0], s[-1]
        where = f"S={s}"
        d = 1 if full(j) else 0
        checks.append(BoundCheck("Theta_S >= (delta-1) nu_j", value, (d - 1) * nu_g[j], where=where, asserted=asserted))
        if not created_invariant(j) and not full(r + 1):
            checks.append(
                BoundCheck(
                    "Theta_S >= nu_{r+1} + (delta-1) nu_j", value, nu_g[r + 1] + (d - 1) * nu_g[j], where=where, asserted=asserted
                )
            )
        if created_invariant(j):
            checks.append(BoundCheck("Theta_S >= 0 after an invariant divisor", value, 0, where=where, asserted=asserted))

    for s, value in zip(part_pp, theta_pp):
        where = f"S={s}"
        r = s[-1]
        checks.append(BoundCheck("Theta over a leader set >= 0", value, 0, where=where, asserted=asserted))
        pieces = [p for p in part_p if p[0] in s]
        running = Fraction(0)
        for idx, piece in enumerate(pieces[:-1]):
            running += big_theta(piece)
            checks.append(
                BoundCheck("partial Theta >= nu after the piece", running, nu_g[piece[-1] + 1], where=f"{where} p={idx + 1}", asserted=asserted)
            )
        if not full(r + 1):
            checks.append(BoundCheck("Theta over a leader set >= nu_{r+1}", value, nu_g[r + 1], where=where, asserted=asserted))

    if domain:
        whole = big_theta(domain)
        checks.append(BoundCheck("Theta over I minus Omega_1 >= 0", whole, 0, asserted=asserted))
        if not full(domain[-1] + 1):
            checks.append(BoundCheck("Theta over I minus Omega_1 >= 1", whole, 1, asserted=asserted))

    diag = PathDiagnostics(
        branch=name,
        path=path,
        nu_branch=nu_g,
        nu_curve=nu_curve,
        tau=tau,
        nu_hamiltonian=nu_h,
        divisor=divisor,
        invariant_divisor=inv_div,
        i_one=i_one,
        omega_one=omega,
        iota=iota,
        rho=rho,
        theta=theta,
        precursors=precursors,
        leaders=leaders,
        partition_p=part_p,
        partition_p_prime=part_pp,
        theta_p=theta_p,
        theta_p_prime=theta_pp,
        z_field_final=z_f_final,
        z_hamiltonian_final=z_h_final,
    )
    return diag, checks


def _select(branches: Sequence[PuiseuxBranch], name: Optional[str]) -> PuiseuxBranch:
    if name is None:
        return branches[0]
    for b in branches:
        if b.name == name:
            return b
    raise ValueError(f"no branch named {name!r}; have {[b.name for b in branches]}")


def check_theorem3(
    field: VectorField,
    branches: Sequence[PuiseuxBranch],
    gamma: Optional[str] = None,
    require_weak_isolation: bool = True,
) -> TheoremReport:
    """
    2 Z_0(F, γ) ≥ Z_0(H, γ), H the hamiltonian of the reduced equation of Γ̂.

    Args:
        field: The foliation
        branches: The branches of Γ̂
        gamma: Name of γ; the first branch when omitted
        require_weak_isolation: Refuse curves failing the weak isolation check.
            When False the inequality is still evaluated and intermediate bounds are
            reported without being asserted

    Raises:
        NotWeaklyIsolated: See ``require_weak_isolation``
    """
    wi = _require_weak_isolation(field, branches, require_weak_isolation)
    target = _select(branches, gamma)
    f = reduced_equation(branches)
    hamiltonian = VectorField.hamiltonian(f)
    germs = _germs(branches)
    tree_f = wi.tree
    tree_h = BlowupEngine(germs, field=hamiltonian).resolve()
    precision = max(tree_f.precision, tree_h.precision)
    z_f = germ_vanishing_order(field, target.germ(), precision)
    z_h = germ_vanishing_order(hamiltonian, target.germ(), precision)

    path, checks = path_diagnostics(tree_f, tree_h, target.name, asserted=wi.verdict)
    checks.insert(
        0,
        BoundCheck(
            "Z_F telescoping",
            sum(n * t for n, t in zip(path.nu_branch, path.tau)) + path.z_field_final,
            z_f,
            relation="==",
        ),
    )
    checks.insert(
        1,
        BoundCheck(
            "Z_H telescoping",
            sum(n * (h - 1) for n, h in zip(path.nu_branch, path.nu_hamiltonian)) + path.z_hamiltonian_final,
            z_h,
            relation="==",
        ),
    )
    if all(b.is_smooth for b in branches) and all(
        _transverse(a, b) for a, b in itertools.combinations(germs, 2)
    ):
        checks.append(BoundCheck("lines: Z_F >= Z_H", z_f, z_h, asserted=wi.verdict))
        checks.append(BoundCheck("lines: Z_H >= 1", z_h, 1))

    report = TheoremReport(
        theorem="theorem3",
        statement="2 Z_0(F, gamma) >= Z_0(H, gamma)",
        lhs=2 * z_f,
        rhs=z_h,
        quantities={"branch": target.name, "Z_F": z_f, "Z_H": z_h, "k": path.k},
        checks=checks,
        hypothesis_met=wi.verdict,
        diagnostics=ProofDiagnostics(weak_isolation=wi, path=path),
    )
    logger.info(f"Theorem 3 along {target.name}: 2*{z_f} >= {z_h}, verdict={report.passed}")
    return report


def proof_diagnostics(
    field: VectorField,
    branches: Sequence[PuiseuxBranch],
    gamma: Optional[str] = None,
) -> ProofDiagnostics:
    """Weak isolation, separation and path data in one object; nothing is refused."""
    wi = weak_isolation(field, branches)
    germs = _germs(branches)
    sep, _ = separation_diagnostics(wi.tree, wi, germs, asserted=wi.verdict)
    diag = ProofDiagnostics(weak_isolation=wi, separation=sep)
    if all(b.is_exact for b in branches):
        hamiltonian = VectorField.hamiltonian(reduced_equation(branches))
        tree_h = BlowupEngine(germs, field=hamiltonian).resolve()
        diag.path, _ = path_diagnostics(wi.tree, tree_h, _select(branches, gamma).name, asserted=wi.verdict)
    return diag


# ----------------------------------------------------------------------------
# Virtual multiplicity and behaviour of weak isolation under one blow-up
# ----------------------------------------------------------------------------

def virtual_bound_check(field: VectorField, branch: PuiseuxBranch) -> TheoremReport:
    """ν_0(F) ≥ μ(γ) for an invariant branch; vacuous when the origin is regular for F."""
    require_invariant(field, [branch])
    nu = field.multiplicity()
    mu = branch.invariants().mu
    report = TheoremReport(
        theorem="virtual",
        statement="nu_0(F) >= mu(gamma)",
        lhs=nu,
        rhs=mu,
        quantities={"nu_F": nu, "mu": mu, "genus": branch.invariants().genus},
        vacuous=not field.is_singular(),
    )
    if report.vacuous:
        logger.info(f"Origin is regular for the field; virtual bound for {branch.name} is vacuous")
    return report


@dataclass(frozen=True)
class BlowupPoint:
    point: str
    members: Tuple[str, ...]
    with_divisor: bool
    singular: bool
    weakly_isolated: Optional[bool]

    def as_dict(self) -> Dict[str, object]:
        return {
            "point": self.point,
            "members": list(self.members),
            "with_divisor": self.with_divisor,
            "singular": self.singular,
            "weakly_isolated": self.weakly_isolated,
        }


@dataclass
class BlowupPropertyReport:
    points: List[BlowupPoint]

    @property
    def vacuous(self) -> int:
        return sum(1 for p in self.points if not p.singular)

    @property
    def verdict(self) -> bool:
        return all(p.weakly_isolated for p in self.points if p.singular)

    def as_dict(self) -> Dict[str, object]:
        return {
            "verdict": "pass" if self.verdict else "fail",
            "vacuous_points": self.vacuous,
            "points": [p.as_dict() for p in self.points],
        }


DIVISOR_GERM = "D_1"


def weak_isolation_blowup_property(field: VectorField, branches: Sequence[PuiseuxBranch]) -> BlowupPropertyReport:
    """
    After blowing up the origin, the invariant part of the total transform
    through each point of D_1 is weakly isolated wherever it is singular.

    Raises:
        NotWeaklyIsolated: If Γ̂ itself is not weakly isolated
    """
    wi = _require_weak_isolation(field, branches, True)
    precision = wi.tree.precision
    divisor_invariant = not field.is_dicritical()
    groups: Dict[Tuple[str, str], Tuple[str, object, List[BranchGerm]]] = {}
    for g in _germs(branches):
        kind, v0, moved = blowup_germ(g, precision)
        key = (kind, format_scalar(v0))
        groups.setdefault(key, (kind, v0, []))[2].append(moved)

    points = []
    for (kind, label), (_, v0, members) in groups.items():
        local = field.chart(kind)
        if v0:
            local = local.translated(0, v0)
        germs = list(members)
        if divisor_invariant:
            germs.append(BranchGerm(DIVISOR_GERM, USeries.zero(), USeries.monomial(1, 1)))
        singular = len(germs) >= 2 or any(g.multiplicity() > 1 for g in germs)
        verdict = weak_isolation_germs(local, germs).verdict if singular else None
        points.append(
            BlowupPoint(
                point=f"{kind}:{label}",
                members=tuple(g.name for g in germs),
                with_divisor=divisor_invariant,
                singular=singular,
                weakly_isolated=verdict,
            )
        )
    report = BlowupPropertyReport(points)
    logger.info(f"Weak isolation after one blow-up: {report.verdict} ({report.vacuous} vacuous points)")
    return report
