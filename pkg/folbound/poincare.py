"""
Global bookkeeping for an invariant curve of a foliation of the projective plane.

Degrees, the genericity of the line at infinity, the Euler characteristic of
the normalization via the genus formula, the Poincaré–Hopf balance of the
restricted foliation and of the hamiltonian, and the degree-bound verdict
deg(Γ) ≤ 2 deg(F) + 2 (2 deg(F) + 1 for irreducible Γ).

Polynomial algebra that needs factorization or system solving goes through
sympy; every local quantity comes from the blow-up engine.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from .algebra import BiPoly, USeries, exact_number, format_scalar, poly_eval_series, scalar_to_fraction
from .blowup import resolve_curve
from .branch import BranchGerm, PuiseuxBranch
from .errors import (
    ConsistencyError,
    MissingSingularity,
    NonGenericInfinity,
    NonRationalSingularity,
    NotInvariant,
    TruncationInsufficient,
)
from .foliation import VectorField
from .indices import germ_vanishing_order
from .theorems import BoundCheck, TheoremReport, WeakIsolationReport, weak_isolation
from .utils.env_loader import initial_precision, max_order
from .utils.logger import get_logger

logger = get_logger(__name__)

X, Y = sp.symbols("x y")

Point = Tuple[Fraction, Fraction]


# ----------------------------------------------------------------------------
# Conversions between BiPoly and sympy
# ----------------------------------------------------------------------------

def to_sympy(p: BiPoly) -> sp.Expr:
    if not p.is_rational():
        raise ValueError(f"global instances need rational coefficients, got {p}")
    terms = []
    for (i, j), c in p.terms.items():
        q = scalar_to_fraction(c)
        terms.append(sp.Rational(q.numerator, q.denominator) * X ** i * Y ** j)
    return sp.Add(*terms)


def from_sympy(expr) -> BiPoly:
    poly = sp.Poly(expr, X, Y)
    return BiPoly({(i, j): Fraction(int(c.p), int(c.q)) for (i, j), c in poly.terms()})


def _total_degree(expr) -> int:
    if expr == 0:
        return -1
    return sp.Poly(expr, X, Y).total_degree()


def point_label(point: Point) -> str:
    return f"({format_scalar(point[0])}, {format_scalar(point[1])})"


def _rational_points(equations: Sequence[sp.Expr], what: str) -> List[Point]:
    """
    Common zeros of polynomial equations, all of which must be rational.

    Raises:
        NonRationalSingularity: If a solution has irrational coordinates
        ConsistencyError: If the solution set is not finite
    """
    points = set()
    for sol in sp.solve(list(equations), [X, Y], dict=True):
        if X not in sol or Y not in sol:
            raise ConsistencyError(f"{what}: the solution set is not finite ({sol})")
        x0, y0 = sol[X], sol[Y]
        if not (x0.is_Rational and y0.is_Rational):
            raise NonRationalSingularity(f"{what}: point ({x0}, {y0}) is not rational")
        points.add((Fraction(int(x0.p), int(x0.q)), Fraction(int(y0.p), int(y0.q))))
    return sorted(points)


# ----------------------------------------------------------------------------
# Instances
# ----------------------------------------------------------------------------

@dataclass
class SingularPoint:
    """A singular point of Γ with its branches in coordinates centred at it."""

    at: Point
    branches: List[PuiseuxBranch]

    @property
    def label(self) -> str:
        return point_label(self.at)


@dataclass
class GlobalInstance:
    """
    An affine invariant curve f = 0 of the polynomial field X.

    Args:
        f: Reduced affine equation of Γ, rational coefficients
        field: Affine vector field of F; optional for curve-only computations
        singular_points: Every singular point of Γ with its local branches
        name: Label used in reports
    """

    f: BiPoly
    field: Optional[VectorField] = None
    singular_points: List[SingularPoint] = dc_field(default_factory=list)
    name: str = "global"

    @property
    def m(self) -> int:
        return self.f.degree()

    @property
    def d(self) -> int:
        return foliation_degree(self._require_field())[0]

    def factors(self) -> List[BiPoly]:
        return irreducible_factors(self.f)

    @property
    def c(self) -> int:
        return len(self.factors())

    def singular_point(self, at: Point) -> Optional[SingularPoint]:
        return next((p for p in self.singular_points if p.at == at), None)

    def _require_field(self) -> VectorField:
        if self.field is None:
            raise ValueError(f"instance {self.name} has no foliation")
        return self.field


def irreducible_factors(f: BiPoly) -> List[BiPoly]:
    """
    Irreducible factors of a reduced polynomial over Q.

    Raises:
        ValueError: If f is constant or has a repeated factor
    """
    if f.degree() < 1:
        raise ValueError("a curve needs a non-constant equation")
    _, factors = sp.factor_list(to_sympy(f), X, Y)
    if any(k > 1 for _, k in factors):
        raise ValueError(f"equation {f} is not reduced")
    return [from_sympy(p) for p, _ in factors]


def check_invariant_curve(field: VectorField, f: BiPoly):
    """
    Raises:
        NotInvariant: If f does not divide X(f)
        ValueError: If a and b share a non-constant factor
    """
    a, b = to_sympy(field.a), to_sympy(field.b)
    if _total_degree(sp.gcd(a, b)) > 0:
        raise ValueError(f"the coefficients of {field} share a factor; divide it out")
    _, remainder = sp.div(sp.expand(to_sympy(field.apply(f))), to_sympy(f), X, Y)
    if remainder != 0:
        raise NotInvariant(f"curve {f} = 0 is not invariant by {field}")


# ----------------------------------------------------------------------------
# Line at infinity
# ----------------------------------------------------------------------------

def foliation_degree(field: VectorField) -> Tuple[int, bool]:
    """
    Degree of the foliation of P^2 defined by an affine polynomial field.

    Returns:
        (d, line_invariant): d = e - 1 when the top homogeneous part of the
            field is a multiple of the radial field, d = e otherwise
    """
    e = field.degree()
    top_a, top_b = field.a.homogeneous_part(e), field.b.homogeneous_part(e)
    cone = BiPoly.y() * top_a - BiPoly.x() * top_b
    if cone.is_zero() and e >= 1:
        return e - 1, False
    return e, True


@dataclass(frozen=True)
class InfinityCheck:
    degree: int
    line_invariant: bool
    singular_at_infinity: bool
    curve_transverse: bool

    @property
    def foliation_generic(self) -> bool:
        return not self.line_invariant and not self.singular_at_infinity

    @property
    def generic(self) -> bool:
        return self.foliation_generic and self.curve_transverse

    def as_dict(self) -> Dict[str, object]:
        return {
            "degree": self.degree,
            "line_invariant": self.line_invariant,
            "singular_at_infinity": self.singular_at_infinity,
            "curve_transverse": self.curve_transverse,
            "generic": self.generic,
        }


def curve_transverse_to_infinity(f: BiPoly) -> bool:
    """The top form of f has m distinct linear factors."""
    top = to_sympy(f.homogeneous_part(f.degree()))
    _, factors = sp.sqf_list(top, X, Y)
    return all(k == 1 for _, k in factors)


def check_line_at_infinity(inst: GlobalInstance) -> InfinityCheck:
    """
    Genericity of L_∞ for the instance.

    When the top part of X is g R (R radial), the singular points of the
    projective foliation on L_∞ are the common roots of g and x b_d - y a_d.
    """
    field = inst._require_field()
    d, invariant = foliation_degree(field)
    singular = invariant
    if not invariant:
        g = field.a.homogeneous_part(d + 1).divide_x(1)
        h = BiPoly.x() * field.b.homogeneous_part(d) - BiPoly.y() * field.a.homogeneous_part(d)
        singular = _total_degree(sp.gcd(to_sympy(g), to_sympy(h))) > 0
    check = InfinityCheck(
        degree=d,
        line_invariant=invariant,
        singular_at_infinity=singular,
        curve_transverse=curve_transverse_to_infinity(inst.f),
    )
    logger.debug(f"Line at infinity for {inst.name}: {check.as_dict()}")
    return check


def require_generic_infinity(inst: GlobalInstance) -> InfinityCheck:
    check = check_line_at_infinity(inst)
    if check.line_invariant:
        raise NonGenericInfinity(f"{inst.name}: the line at infinity is invariant")
    if check.singular_at_infinity:
        raise NonGenericInfinity(f"{inst.name}: the foliation has singular points on the line at infinity")
    if not check.curve_transverse:
        raise NonGenericInfinity(f"{inst.name}: the curve is tangent to the line at infinity")
    return check


# ----------------------------------------------------------------------------
# Local data at the points of Γ
# ----------------------------------------------------------------------------

def implicit_germ(fp: BiPoly, name: str, precision: int) -> BranchGerm:
    """
    Parametrization (t, φ(t)) or (φ(t), t) of a curve at a smooth origin.

    The coefficients of φ are obtained one at a time from
    f(t, φ_<k(t) + c t^k) ≡ f(t, φ_<k(t)) + f_y(0) c t^k mod t^(k+1).
    """
    if fp.coefficient(0, 0):
        raise ValueError(f"the origin is not on {fp} = 0")
    swap = not fp.coefficient(0, 1)
    g = fp.swap() if swap else fp
    slope = g.coefficient(0, 1)
    if not slope:
        raise ValueError(f"the origin is a singular point of {fp} = 0")
    t = USeries.monomial(1, 1)
    coeffs: Dict[int, object] = {}
    phi: Optional[USeries] = None
    for k in range(1, precision + 1):
        value = poly_eval_series(g, t, USeries(coeffs))
        if value.is_zero():
            phi = USeries(coeffs)
            break
        c = value.coefficient(k)
        if c:
            coeffs[k] = -c / slope
    if phi is None:
        phi = USeries(coeffs, known_order=precision)
    germ = BranchGerm(name, t, phi)
    return germ.swapped() if swap else germ


def _vanishing_order(field: VectorField, make_germ, what: str) -> int:
    """Z along a germ rebuilt at doubling precision until the order is determined."""
    precision = initial_precision()
    cap = max_order()
    while True:
        try:
            return germ_vanishing_order(field, make_germ(precision), precision)
        except TruncationInsufficient as e:
            if precision >= cap:
                raise TruncationInsufficient(f"{what}: {e}") from e
            precision = min(2 * precision, cap)
            logger.warning(f"{what}: retrying at precision {precision}")


def _on_curve(p: BiPoly, germ: BranchGerm) -> bool:
    return not poly_eval_series(p, germ.x, germ.y).coeffs


def _delta(branches: Sequence[PuiseuxBranch]) -> int:
    """δ = Σ m(m - 1)/2 over the infinitely near points of the union."""
    if not branches or (len(branches) == 1 and branches[0].is_smooth):
        return 0
    tree = resolve_curve(branches)
    return sum(c.total_multiplicity * (c.total_multiplicity - 1) // 2 for c in tree.centers)


@dataclass
class LocalPoint:
    """Zeros of F and H on Γ at one point, per branch, and the δ of each component there."""

    at: Point
    singular: bool
    branch_component: Dict[str, int]
    z_field: Dict[str, int]
    z_hamiltonian: Dict[str, int]
    delta: int
    component_delta: Dict[int, int]
    weak_isolation: Optional[WeakIsolationReport] = None

    @property
    def label(self) -> str:
        return point_label(self.at)

    def as_dict(self) -> Dict[str, object]:
        out = {
            "point": self.label,
            "singular": self.singular,
            "branches": dict(self.branch_component),
            "Z_F": dict(self.z_field),
            "Z_H": dict(self.z_hamiltonian),
            "delta": self.delta,
            "component_delta": {str(k): v for k, v in self.component_delta.items()},
        }
        if self.weak_isolation is not None:
            out["weakly_isolated"] = self.weak_isolation.verdict
        return out


def _component_of(germ: BranchGerm, local_factors: Sequence[BiPoly], where: str) -> int:
    owners = [k for k, p in enumerate(local_factors) if _on_curve(p, germ)]
    if len(owners) != 1:
        raise MissingSingularity(f"branch {germ.name} at {where} lies on {len(owners)} components of the curve")
    return owners[0]


def singular_point_data(inst: GlobalInstance, point: SingularPoint, factors: Sequence[BiPoly]) -> LocalPoint:
    """
    Check the supplied branches against f and compute δ and the local indices.

    Raises:
        MissingSingularity: If a branch is not on Γ or the branches miss part of the multiplicity
    """
    x0, y0 = point.at
    fp = inst.f.translate(x0, y0)
    where = point.label
    for b in point.branches:
        if not _on_curve(fp, b.germ()):
            raise MissingSingularity(f"branch {b.name} does not lie on the curve at {where}")
    multiplicity = int(fp.order())
    supplied = sum(b.multiplicity for b in point.branches)
    if supplied != multiplicity:
        raise MissingSingularity(
            f"branches at {where} have total multiplicity {supplied}, the curve has multiplicity {multiplicity}"
        )
    local_factors = [p.translate(x0, y0) for p in factors]
    owner = {b.name: _component_of(b.germ(), local_factors, where) for b in point.branches}
    delta = _delta(point.branches)
    component_delta = {
        k: _delta([b for b in point.branches if owner[b.name] == k]) for k in sorted(set(owner.values()))
    }
    if len(point.branches) > 1:
        tree = resolve_curve(point.branches)
        crossing = sum(
            tree.noether_intersection(a.name, b.name)
            for i, a in enumerate(point.branches)
            for b in point.branches[i + 1:]
            if owner[a.name] != owner[b.name]
        )
        if delta != sum(component_delta.values()) + crossing:
            raise ConsistencyError(f"δ at {where} does not split over the components")

    z_field: Dict[str, int] = {}
    z_ham: Dict[str, int] = {}
    wi = None
    hamiltonian = VectorField.hamiltonian(inst.f).translated(x0, y0)
    for b in point.branches:
        z_ham[b.name] = germ_vanishing_order(hamiltonian, b.germ(), initial_precision())
    if inst.field is not None:
        local = inst.field.translated(x0, y0)
        for b in point.branches:
            z_field[b.name] = germ_vanishing_order(local, b.germ(), initial_precision())
        wi = weak_isolation(local, point.branches)
    return LocalPoint(
        at=point.at,
        singular=True,
        branch_component=owner,
        z_field=z_field,
        z_hamiltonian=z_ham,
        delta=delta,
        component_delta=component_delta,
        weak_isolation=wi,
    )


def smooth_zero_data(inst: GlobalInstance, at: Point, factors: Sequence[BiPoly]) -> LocalPoint:
    """Z of F at a smooth point of Γ where the field vanishes."""
    x0, y0 = at
    fp = inst.f.translate(x0, y0)
    name = f"Gamma{point_label(at)}"
    local_factors = [p.translate(x0, y0) for p in factors]
    owners = [k for k, p in enumerate(local_factors) if not p.coefficient(0, 0)]
    if len(owners) != 1:
        raise ConsistencyError(f"smooth point {point_label(at)} lies on {len(owners)} components")
    local = inst._require_field().translated(x0, y0)
    z = _vanishing_order(local, lambda prec: implicit_germ(fp, name, prec), f"Z_F at {point_label(at)}")
    return LocalPoint(
        at=at,
        singular=False,
        branch_component={name: owners[0]},
        z_field={name: z},
        z_hamiltonian={name: 0},
        delta=0,
        component_delta={},
    )


def local_points(inst: GlobalInstance) -> List[LocalPoint]:
    """
    Every point of Γ carrying a zero of F or H.

    Raises:
        MissingSingularity: If supplied and computed singular points differ
        NonRationalSingularity: If a required point is not rational
    """
    f = to_sympy(inst.f)
    fx, fy = sp.diff(f, X), sp.diff(f, Y)
    singular = _rational_points([f, fx, fy], f"singular points of {inst.name}")
    supplied = sorted(p.at for p in inst.singular_points)
    if supplied != singular:
        missing = [point_label(p) for p in singular if p not in supplied]
        extra = [point_label(p) for p in supplied if p not in singular]
        raise MissingSingularity(f"{inst.name}: singular points missing {missing}, not singular {extra}")
    factors = inst.factors()
    points = [singular_point_data(inst, p, factors) for p in sorted(inst.singular_points, key=lambda p: p.at)]
    if inst.field is not None:
        zeros = _rational_points(
            [to_sympy(inst.field.a), to_sympy(inst.field.b), f], f"zeros of the field on {inst.name}"
        )
        for at in zeros:
            if at not in singular:
                points.append(smooth_zero_data(inst, at, factors))
    logger.debug(f"{inst.name}: {len(points)} points of the curve carry zeros")
    return points


# ----------------------------------------------------------------------------
# Euler characteristic and Poincaré–Hopf
# ----------------------------------------------------------------------------

@dataclass
class ComponentBalance:
    component: int
    equation: str
    degree: int
    genus: int
    z_field: Optional[int]
    z_hamiltonian: int

    @property
    def chi(self) -> int:
        return 2 - 2 * self.genus

    def as_dict(self) -> Dict[str, object]:
        return {
            "component": self.component,
            "equation": self.equation,
            "degree": self.degree,
            "genus": self.genus,
            "chi": self.chi,
            "Z_F": self.z_field,
            "Z_H": self.z_hamiltonian,
        }


def _genera(inst: GlobalInstance, points: Sequence[LocalPoint]) -> List[Tuple[BiPoly, int]]:
    out = []
    for k, p in enumerate(inst.factors()):
        m = p.degree()
        g = (m - 1) * (m - 2) // 2 - sum(lp.component_delta.get(k, 0) for lp in points)
        if g < 0:
            raise NonRationalSingularity(f"component {p} = 0 splits over a larger field")
        out.append((p, g))
    return out


def euler_characteristic(inst: GlobalInstance, points: Optional[Sequence[LocalPoint]] = None) -> int:
    """
    χ of the normalization of Γ: Σ over components of 2 - 2 g_i, g_i from the genus formula.

    Raises:
        MissingSingularity: If the supplied singular point data is inconsistent with f
    """
    if points is None:
        points = local_points(inst)
    chi = sum(2 - 2 * g for _, g in _genera(inst, points))
    logger.info(f"{inst.name}: Euler characteristic {chi}")
    return chi


@dataclass
class PoincareHopfReport:
    m: int
    d: int
    chi: int
    z_field: Optional[int]
    z_hamiltonian: int
    infinity: InfinityCheck
    points: List[LocalPoint]
    components: List[ComponentBalance]

    @property
    def poles_field(self) -> int:
        return self.m * (self.d - 1)

    @property
    def poles_hamiltonian(self) -> int:
        return self.m * (self.m - 3)

    @property
    def field_checked(self) -> bool:
        return self.z_field is not None

    @property
    def checks(self) -> List[BoundCheck]:
        out = [BoundCheck("Z_H - P_H = chi", self.z_hamiltonian - self.poles_hamiltonian, self.chi, "==")]
        if self.field_checked:
            out.append(BoundCheck("Z_F - P_F = chi", self.z_field - self.poles_field, self.chi, "=="))
        degree = self.m
        for comp in self.components:
            where = f"component {comp.component}"
            out.append(
                BoundCheck(
                    "Z_H - P_H = chi", comp.z_hamiltonian - comp.degree * (degree - 3), comp.chi, "==", where
                )
            )
            if self.field_checked:
                out.append(
                    BoundCheck("Z_F - P_F = chi", comp.z_field - comp.degree * (self.d - 1), comp.chi, "==", where)
                )
        return out

    @property
    def verdict(self) -> bool:
        return all(c.holds for c in self.checks)

    def as_dict(self) -> Dict[str, object]:
        return {
            "verdict": "pass" if self.verdict else "fail",
            "m": self.m,
            "d": self.d,
            "chi": self.chi,
            "Z_F": self.z_field,
            "P_F": self.poles_field if self.field_checked else None,
            "Z_H": self.z_hamiltonian,
            "P_H": self.poles_hamiltonian,
            "field_side": "checked" if self.field_checked else "skipped",
            "infinity": self.infinity.as_dict(),
            "points": [p.as_dict() for p in self.points],
            "components": [c.as_dict() for c in self.components],
            "checks": [c.as_dict() for c in self.checks],
        }


def poincare_hopf_check(inst: GlobalInstance) -> PoincareHopfReport:
    """
    Z_F - m(d - 1) = χ = Z_H - m(m - 3), globally and on every component.

    The field side needs a generic line at infinity for F and is reported as
    skipped otherwise; the hamiltonian side only needs Γ transverse to L_∞.

    Raises:
        NonGenericInfinity: If Γ is tangent to the line at infinity
        NonRationalSingularity: If a zero on Γ is not rational
        NotInvariant: If Γ is not invariant by the field
    """
    field = inst._require_field()
    check_invariant_curve(field, inst.f)
    infinity = check_line_at_infinity(inst)
    if not infinity.curve_transverse:
        raise NonGenericInfinity(f"{inst.name}: the curve is tangent to the line at infinity")
    points = local_points(inst)
    genera = _genera(inst, points)
    components = []
    for k, (p, g) in enumerate(genera):
        z_f = sum(z for lp in points for name, z in lp.z_field.items() if lp.branch_component[name] == k)
        z_h = sum(z for lp in points for name, z in lp.z_hamiltonian.items() if lp.branch_component[name] == k)
        components.append(
            ComponentBalance(
                component=k,
                equation=str(p),
                degree=p.degree(),
                genus=g,
                z_field=z_f if infinity.foliation_generic else None,
                z_hamiltonian=z_h,
            )
        )
    z_field = sum(sum(lp.z_field.values()) for lp in points)
    if not infinity.foliation_generic:
        logger.warning(f"{inst.name}: line at infinity is not generic for the foliation; field balance skipped")
    report = PoincareHopfReport(
        m=inst.m,
        d=infinity.degree,
        chi=sum(c.chi for c in components),
        z_field=z_field if infinity.foliation_generic else None,
        z_hamiltonian=sum(sum(lp.z_hamiltonian.values()) for lp in points),
        infinity=infinity,
        points=points,
        components=components,
    )
    logger.info(f"{inst.name}: Poincaré–Hopf balance {'holds' if report.verdict else 'FAILS'}")
    return report


# ----------------------------------------------------------------------------
# Degree bound
# ----------------------------------------------------------------------------

def degree_bound_verdict(inst: GlobalInstance) -> TheoremReport:
    """
    deg(Γ) ≤ 2 deg(F) + 2, and ≤ 2 deg(F) + 1 when Γ is irreducible.

    With the Poincaré–Hopf balance available the chain
    m(d - 1) = m(m - 3) + Z_F - Z_H, Z_F ≥ Z_H/2, d ≥ m/2 - c/m - 1/2
    is evaluated; when every component is a line the stronger Z_F ≥ Z_H
    gives m ≤ d + 2. The local bounds need every singular point of Γ to be
    weakly isolated; that hypothesis is reported, not required.
    """
    field = inst._require_field()
    check_invariant_curve(field, inst.f)
    infinity = check_line_at_infinity(inst)
    m, d, c = inst.m, infinity.degree, inst.c
    irreducible = c == 1
    report = TheoremReport(
        theorem="theorem4",
        statement="deg(Gamma) <= 2 deg(F) + 1" if irreducible else "deg(Gamma) <= 2 deg(F) + 2",
        lhs=2 * d + 1 if irreducible else 2 * d + 2,
        rhs=m,
        quantities={"m": m, "d": d, "c": c, "line_at_infinity": infinity.as_dict()},
    )

    ph: Optional[PoincareHopfReport] = None
    if infinity.curve_transverse:
        ph = poincare_hopf_check(inst)
        points = ph.points
    else:
        logger.warning(f"{inst.name}: curve tangent to the line at infinity; Poincaré–Hopf skipped")
        points = local_points(inst)

    isolated = True
    for lp in points:
        if not lp.singular:
            continue
        wi = lp.weak_isolation
        isolated = isolated and wi.verdict
        for name, z_h in lp.z_hamiltonian.items():
            report.checks.append(
                BoundCheck(
                    "Z_F >= Z_H/2", lp.z_field[name], Fraction(z_h, 2), ">=", f"{name} at {lp.label}", wi.verdict
                )
            )
    report.hypothesis_met = isolated
    report.quantities["weakly_isolated"] = isolated

    lines = all(p.degree() == 1 for p in inst.factors())
    if ph is not None and ph.field_checked:
        report.quantities.update({"chi": ph.chi, "Z_F": ph.z_field, "Z_H": ph.z_hamiltonian})
        report.checks.extend(ph.checks)
        report.checks.append(BoundCheck("Z_F >= Z_H/2", ph.z_field, Fraction(ph.z_hamiltonian, 2), asserted=isolated))
        report.checks.append(
            BoundCheck("d >= m/2 - c/m - 1/2", d, Fraction(m, 2) - Fraction(c, m) - Fraction(1, 2), asserted=isolated)
        )
        if lines:
            report.checks.append(BoundCheck("Z_F >= Z_H", ph.z_field, ph.z_hamiltonian, asserted=isolated))
    elif ph is not None:
        report.quantities.update({"chi": ph.chi, "Z_H": ph.z_hamiltonian})
        report.checks.extend(ph.checks)
    if lines:
        report.checks.append(BoundCheck("m <= d + 2", d + 2, m, asserted=isolated))

    if not isolated:
        logger.warning(f"{inst.name}: a singular point is not weakly isolated; local bounds reported only")
    logger.info(f"{inst.name}: m={m} d={d} c={c} verdict {'pass' if report.passed else 'fail'}")
    return report


def global_quantities(inst: GlobalInstance) -> Dict[str, object]:
    """Degrees and component data, for reports."""
    out: Dict[str, object] = {"m": inst.m, "c": inst.c, "components": [str(p) for p in inst.factors()]}
    if inst.field is not None:
        out["d"] = inst.d
    out["singular_points"] = [p.label for p in inst.singular_points]
    return {k: exact_number(v) if isinstance(v, (int, Fraction)) else v for k, v in out.items()}
