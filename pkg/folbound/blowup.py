"""
Exact blow-up engine.

BlowupEngine resolves a list of germs (minimal resolution with strict
transforms smooth, separated and transverse to the divisor at trace points)
and can carry one vector field along the same centers, keeping the exact
per-component index sums needed by Hertling's formula.
"""

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .algebra import Scalar, format_scalar
from .branch import BranchGerm, PuiseuxBranch
from .errors import ConsistencyError, NotInvariant, TruncationInsufficient
from .foliation import (
    VectorField,
    axis_index,
    blowup_germ,
    divisor_index_sum,
    germ_is_invariant,
    germ_tangent_to_axis,
    germ_through_origin,
)
from .utils.env_loader import initial_precision, max_order
from .utils.logger import get_logger

logger = get_logger(__name__)


@dataclass
class Component:
    """An exceptional component D_j, created by blowing up center j - 1."""

    comp_id: int
    center: int
    weight: int
    invariant: Optional[bool] = None
    index_sum: Optional[int] = None
    initial_sum: Optional[int] = None

    @property
    def dicritical(self) -> bool:
        return self.invariant is False


@dataclass
class Center:
    """A blow-up center P_j in the local chart where it was reached."""

    center_id: int
    parent: Optional[int]
    chart: str
    v0: Scalar
    axes: Dict[str, int]
    multiplicities: Dict[str, int]
    field: Optional[VectorField] = None
    nu: Optional[int] = None
    dicritical: Optional[bool] = None
    index_updates: Dict[int, Tuple[int, int]] = dc_field(default_factory=dict)

    @property
    def created(self) -> int:
        return self.center_id + 1

    @property
    def components(self) -> List[int]:
        return sorted(self.axes.values())

    @property
    def is_corner(self) -> bool:
        return len(self.axes) == 2

    @property
    def total_multiplicity(self) -> int:
        return sum(self.multiplicities.values())

    @property
    def tau(self) -> Optional[int]:
        """ν for a dicritical center, ν - 1 otherwise."""
        if self.nu is None:
            return None
        return self.nu if self.dicritical else self.nu - 1


@dataclass
class Attachment:
    """Where a strict transform finally meets the divisor."""

    germ: str
    component: Optional[int]
    parent_center: Optional[int]
    chart: str
    v0: Scalar
    local_germ: BranchGerm
    field: Optional[VectorField] = None
    kappa: Optional[int] = None

    @property
    def point_key(self) -> Tuple:
        return (self.parent_center, self.chart, format_scalar(self.v0))


class ResolutionTree:
    """
    The finished resolution: centers, components, attachments and dual graph.

    Components are numbered so that D_{j+1} is created by blowing up P_j.
    """

    def __init__(
        self,
        centers: Sequence[Center],
        components: Dict[int, Component],
        attachments: Dict[str, Attachment],
        dual: nx.Graph,
        germ_names: Sequence[str],
        field: Optional[VectorField],
        precision: int,
    ):
        self.centers = list(centers)
        self.components = components
        self.attachments = attachments
        self.dual = dual
        self.germ_names = list(germ_names)
        self.field = field
        self.precision = precision

    @property
    def has_field(self) -> bool:
        return self.field is not None

    def __len__(self) -> int:
        return len(self.centers)

    def weights(self) -> Dict[int, int]:
        return {cid: comp.weight for cid, comp in self.components.items()}

    def dual_graph(self) -> nx.Graph:
        return self.dual.copy()

    def germ_path(self, name: str) -> List[int]:
        return [c.center_id for c in self.centers if name in c.multiplicities]

    def multiplicity_sequence(self, name: str) -> List[int]:
        return [c.multiplicities[name] for c in self.centers if name in c.multiplicities]

    def ancestors(self, center_id: int) -> List[int]:
        """Centers from P_0 down to the given one, inclusive."""
        chain = []
        cur: Optional[int] = center_id
        while cur is not None:
            chain.append(cur)
            cur = self.centers[cur].parent
        return list(reversed(chain))

    def is_descendant(self, center_id: int, ancestor: int) -> bool:
        return ancestor in self.ancestors(center_id)

    def neighbors(self, comp_id: int) -> List[int]:
        return sorted(self.dual.neighbors(comp_id))

    def invariant_valence(self, comp_id: int) -> int:
        """Number of invariant components meeting the given one."""
        return sum(1 for c in self.dual.neighbors(comp_id) if self.components[c].invariant)

    def kappa_sum(self, comp_id: int) -> int:
        """Σ_P κ_P over the component: Z - 1 at corners with both components invariant."""
        comp = self.components[comp_id]
        if comp.index_sum is None:
            raise ValueError("kappa sums need a resolution carrying a vector field")
        if comp.invariant:
            return comp.index_sum - self.invariant_valence(comp_id)
        return comp.index_sum

    def invariant_components(self) -> List[int]:
        return [cid for cid, c in sorted(self.components.items()) if c.invariant]

    def dicritical_components(self) -> List[int]:
        return [cid for cid, c in sorted(self.components.items()) if c.invariant is False]

    def shared_centers(self, name_a: str, name_b: str) -> List[int]:
        return [c.center_id for c in self.centers if name_a in c.multiplicities and name_b in c.multiplicities]

    def noether_intersection(self, name_a: str, name_b: str) -> int:
        """Σ m_P(a) m_P(b) over the centers both germs pass through."""
        return sum(
            self.centers[cid].multiplicities[name_a] * self.centers[cid].multiplicities[name_b]
            for cid in self.shared_centers(name_a, name_b)
        )

    def graph_attributes(self) -> nx.Graph:
        g = self.dual.copy()
        for cid, comp in self.components.items():
            g.nodes[cid]["weight"] = comp.weight
            g.nodes[cid]["invariant"] = comp.invariant
            g.nodes[cid]["center"] = comp.center
        return g


class BlowupEngine:
    """
    Resolve germs by point blow-ups, optionally transporting a vector field.

    Args:
        germs: Germs through the origin
        field: Vector field to transport, or None for curve-only resolution
        blow_up_origin: Always blow up P_0, even for a smooth curve
        precision: First truncation order for non-monomial divisions.
            Defaults to FOLBOUND_PRECISION
        max_precision: Retry cap. Defaults to FOLBOUND_MAX_ORDER
    """

    def __init__(
        self,
        germs: Sequence[BranchGerm],
        field: Optional[VectorField] = None,
        blow_up_origin: bool = True,
        precision: Optional[int] = None,
        max_precision: Optional[int] = None,
    ):
        names = [g.name for g in germs]
        if len(set(names)) != len(names):
            raise ValueError(f"germ names must be unique, got {names}")
        for g in germs:
            germ_through_origin(g)
        self.germs = list(germs)
        self.field = field
        self.blow_up_origin = blow_up_origin
        self.precision = precision or initial_precision()
        self.max_precision = max_precision or max_order()

    def resolve(self) -> ResolutionTree:
        """Run the resolution, doubling the precision on TruncationInsufficient."""
        precision = self.precision
        while True:
            try:
                return self._run(precision)
            except TruncationInsufficient as e:
                if precision >= self.max_precision:
                    raise
                precision = min(2 * precision, self.max_precision)
                logger.warning(f"Resolution needs more precision ({e}); retrying at order {precision}")

    # -- engine ------------------------------------------------------------

    def _run(self, precision: int) -> ResolutionTree:
        self._precision = precision
        self._centers: List[Center] = []
        self._components: Dict[int, Component] = {}
        self._attachments: Dict[str, Attachment] = {}
        self._dual = nx.Graph()
        self._visit(None, "origin", 0, {}, [(g.name, g) for g in self.germs], self.field)
        tree = ResolutionTree(
            self._centers,
            self._components,
            self._attachments,
            self._dual,
            [g.name for g in self.germs],
            self.field,
            precision,
        )
        self._check_weights(tree)
        logger.debug(f"Resolution finished: {len(tree)} centers, precision {precision}")
        return tree

    def _needs_blowup(self, axes: Dict[str, int], germs: List[Tuple[str, BranchGerm]]) -> bool:
        if not axes:
            return self.blow_up_origin or sum(g.multiplicity() for _, g in germs) >= 2
        if not germs:
            return False
        if sum(g.multiplicity() for _, g in germs) >= 2:
            return True
        if len(axes) == 2:
            return True
        (axis,) = axes
        return germ_tangent_to_axis(germs[0][1], axis)

    def _visit(
        self,
        parent: Optional[int],
        chart: str,
        v0: Scalar,
        axes: Dict[str, int],
        germs: List[Tuple[str, BranchGerm]],
        field: Optional[VectorField],
    ):
        if not self._needs_blowup(axes, germs):
            for name, g in germs:
                comp = next(iter(axes.values()), None)
                kappa = None
                if field is not None and comp is not None:
                    kappa = axis_index(field, "x", self._components[comp].invariant)
                self._attachments[name] = Attachment(name, comp, parent, chart, v0, g, field, kappa)
            return

        cid = len(self._centers)
        center = Center(
            center_id=cid,
            parent=parent,
            chart=chart,
            v0=v0,
            axes=dict(axes),
            multiplicities={name: g.multiplicity() for name, g in germs},
            field=field,
        )
        self._centers.append(center)
        new_comp = center.created

        if axes:
            weight = sum(self._components[c].weight for c in axes.values())
        else:
            weight = 1
        component = Component(comp_id=new_comp, center=cid, weight=weight)
        self._components[new_comp] = component
        self._dual.add_node(new_comp)
        for c in axes.values():
            self._dual.add_edge(new_comp, c)
        if len(axes) == 2 and self._dual.has_edge(axes["x"], axes["y"]):
            self._dual.remove_edge(axes["x"], axes["y"])

        chart_fields: Dict[str, VectorField] = {}
        if field is not None:
            center.nu = field.multiplicity()
            center.dicritical = field.is_dicritical()
            component.invariant = not center.dicritical
            total = divisor_index_sum(field)
            expected = center.nu - 1 if center.dicritical else center.nu + 1
            if total != expected:
                raise ConsistencyError(
                    f"index sum {total} on D_{new_comp} disagrees with multiplicity {center.nu}"
                )
            component.index_sum = component.initial_sum = total
            chart_fields = {"x": field.chart("x"), "y": field.chart("y")}
            for axis, c in axes.items():
                old = self._components[c]
                before = axis_index(field, axis, old.invariant)
                # {x=0} reappears as {v=0} at the chart "y" origin, {y=0} at the chart "x" origin
                after = axis_index(chart_fields["y" if axis == "x" else "x"], "y", old.invariant)
                old.index_sum += after - before
                center.index_updates[c] = (before, after)
        logger.debug(
            f"P_{cid}: parent={parent} chart={chart} v0={format_scalar(v0)} axes={axes} "
            f"mult={center.multiplicities} nu={center.nu} dicritical={center.dicritical}"
        )

        groups: Dict[Tuple[str, str], Tuple[str, Scalar, List[Tuple[str, BranchGerm]]]] = {}
        for name, g in germs:
            kind, point, moved = blowup_germ(g, self._precision)
            key = (kind, format_scalar(point))
            if key not in groups:
                groups[key] = (kind, point, [])
            groups[key][2].append((name, moved))

        for kind, point, members in groups.values():
            child_axes = {"x": new_comp}
            if kind == "x" and not point and "y" in axes:
                child_axes["y"] = axes["y"]
            if kind == "y" and "x" in axes:
                child_axes["y"] = axes["x"]
            child_field = None
            if field is not None:
                base = chart_fields[kind]
                child_field = base.translated(0, point) if point else base
            self._visit(cid, kind, point, child_axes, members, child_field)

    def _check_weights(self, tree: ResolutionTree):
        for center in tree.centers:
            comp = tree.components[center.created]
            expected = sum(tree.components[c].weight for c in center.axes.values()) if center.axes else 1
            if comp.weight != expected:
                raise ConsistencyError(f"weight of D_{comp.comp_id} is {comp.weight}, expected {expected}")


# ----------------------------------------------------------------------------
# Module-level operations
# ----------------------------------------------------------------------------

def resolve_curve(branches: Sequence[PuiseuxBranch], blow_up_origin: bool = False) -> ResolutionTree:
    """
    Minimal resolution of a union of branches at the origin.

    Returns:
        ResolutionTree: Centers with per-branch multiplicities, weights and dual graph
    """
    return BlowupEngine([b.germ() for b in branches], blow_up_origin=blow_up_origin).resolve()


@dataclass(frozen=True)
class FoliationTransform:
    """Both charts of the blow-up of one center."""

    chart_x: VectorField
    chart_y: VectorField
    dicritical: bool
    multiplicity: int
    nu_drop: int


def transform_foliation(field: VectorField, center: Tuple[Scalar, Scalar] = (0, 0)) -> FoliationTransform:
    """
    Blow up a vector field at a point.

    Args:
        field: The vector field
        center: Point to blow up, translated to the origin first

    Returns:
        FoliationTransform: Strict transforms in both charts, dicriticalness,
            ν and the power of the exceptional equation divided out
    """
    local = field.translated(*center) if any(center) else field
    return FoliationTransform(
        chart_x=local.chart("x"),
        chart_y=local.chart("y"),
        dicritical=local.is_dicritical(),
        multiplicity=local.multiplicity(),
        nu_drop=local.exceptional_power(),
    )


@dataclass(frozen=True)
class FollowStep:
    """One infinitely near point of a followed branch."""

    center: int
    nu_branch: int
    nu_field: int
    dicritical: bool
    tau: int
    components: Tuple[int, ...]


def follow_branch(
    field: VectorField,
    branch: PuiseuxBranch,
    tree: Optional[ResolutionTree] = None,
) -> List[FollowStep]:
    """
    Multiplicities of a branch and of the transformed field along the branch's infinitely near points.

    Args:
        field: The foliation
        branch: An invariant branch
        tree: A resolution carrying ``field`` and containing the branch; built if omitted

    Raises:
        NotInvariant: If the branch is not invariant
    """
    germ = branch.germ()
    if not germ_is_invariant(field, germ):
        raise NotInvariant(f"branch {branch.name} is not invariant by {field}")
    if tree is None or not tree.has_field or branch.name not in tree.germ_names:
        tree = BlowupEngine([germ], field=field).resolve()
    steps = []
    for cid in tree.germ_path(branch.name):
        c = tree.centers[cid]
        steps.append(
            FollowStep(
                center=cid,
                nu_branch=c.multiplicities[branch.name],
                nu_field=c.nu,
                dicritical=c.dicritical,
                tau=c.tau,
                components=tuple(c.components),
            )
        )
    return steps
