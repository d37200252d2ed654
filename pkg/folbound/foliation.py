"""
Polynomial vector fields, their blow-up charts and the germs they act on.

Conventions used by the blow-up engine:

- a center is always the local origin;
- chart "x" is (x, y) = (u, u v), chart "y" is (x, y) = (u v, u);
- in both charts the exceptional divisor is {u = 0}, the local "x" axis;
- after a chart "x" blow-up at v = v0 the coordinates are (u, v - v0).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import sympy as sp

from .algebra import INFINITY, BiPoly, CycloNum, Scalar, USeries, is_rational_scalar, poly_eval_series, scalar_to_fraction
from .branch import BranchGerm
from .errors import InvalidBranch, NotInvariant, OrderBeyondTruncation, TruncationInsufficient
from .utils.logger import get_logger

logger = get_logger(__name__)

AXES = ("x", "y")


def _shift_x(p: BiPoly, k: int) -> BiPoly:
    """Divide by x^k, or multiply by x^-k when k is negative."""
    return p.divide_x(k) if k >= 0 else p.mul_x(-k)


# ----------------------------------------------------------------------------
# Common factors through sympy
# ----------------------------------------------------------------------------

_X, _Y = sp.symbols("x y")


def _coefficient_order(*polys: BiPoly) -> int:
    """Smallest N with every coefficient in Q(ζ_N); 1 for rational polynomials."""
    order = 1
    for p in polys:
        for c in p.terms.values():
            if isinstance(c, CycloNum) and not c.is_rational():
                order = order * c.order // math.gcd(order, c.order)
    return order


def _rational_expr(q: Fraction) -> sp.Rational:
    return sp.Rational(q.numerator, q.denominator)


def _to_poly(p: BiPoly, order: int) -> sp.Poly:
    if order == 1:
        expr = sp.Add(*(_rational_expr(scalar_to_fraction(c)) * _X ** i * _Y ** j for (i, j), c in p.terms.items()))
        return sp.Poly(expr, _X, _Y, domain=sp.QQ)
    zeta = sp.exp(2 * sp.pi * sp.I / order)
    terms = []
    for (i, j), c in p.terms.items():
        if is_rational_scalar(c):
            value = _rational_expr(scalar_to_fraction(c))
        else:
            value = sp.Add(*(_rational_expr(q) * zeta ** k for k, q in enumerate(c.embed(order).coeffs) if q))
        terms.append(value * _X ** i * _Y ** j)
    return sp.Poly(sp.Add(*terms), _X, _Y, extension=zeta)


def _ground_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _from_poly(poly: sp.Poly, order: int) -> BiPoly:
    terms = {}
    for (i, j), c in poly.as_dict(native=True).items():
        if order == 1:
            terms[(i, j)] = _ground_fraction(c)
            continue
        # algebraic field elements list their coordinates in ζ_N, highest power first
        coeffs = [_ground_fraction(q) for q in reversed(c.to_list())]
        value = CycloNum(order, coeffs)
        terms[(i, j)] = value.to_fraction() if value.is_rational() else value
    return BiPoly(terms)


def common_factor_at_origin(a: BiPoly, b: BiPoly) -> Optional[BiPoly]:
    """
    Product of the common factors of a and b that vanish at the origin.

    The gcd is taken over the cyclotomic field of the coefficients and split
    into irreducible factors; units at the origin are kept.

    Returns:
        BiPoly or None: The factor to divide out, None when a and b are coprime at the origin
    """
    order = _coefficient_order(a, b)
    pa, pb = _to_poly(a, order), _to_poly(b, order)
    g = pa.gcd(pb)
    if g.total_degree() < 1:
        return None
    _, factors = g.factor_list()
    through_origin = [(f, k) for f, k in factors if not f.as_dict(native=True).get((0, 0))]
    if not through_origin:
        return None
    h = through_origin[0][0] ** through_origin[0][1]
    for f, k in through_origin[1:]:
        h = h * f ** k
    return _from_poly(h, order)


def _exact_quotient(p: BiPoly, h: BiPoly) -> BiPoly:
    order = _coefficient_order(p, h)
    return _from_poly(_to_poly(p, order).exquo(_to_poly(h, order)), order)


class VectorField:
    """
    X = a ∂/∂x + b ∂/∂y with polynomial coefficients.

    Args:
        a: Coefficient of ∂/∂x
        b: Coefficient of ∂/∂y
    """

    __slots__ = ("a", "b")

    def __init__(self, a: BiPoly, b: BiPoly):
        if a.is_zero() and b.is_zero():
            raise ValueError("the zero vector field defines no foliation")
        self.a = a
        self.b = b

    @classmethod
    def hamiltonian(cls, f: BiPoly) -> "VectorField":
        """H = f_y ∂x - f_x ∂y."""
        return cls(f.diff_y(), -f.diff_x())

    @classmethod
    def radial(cls) -> "VectorField":
        return cls(BiPoly.x(), BiPoly.y())

    # -- local invariants --------------------------------------------------

    def multiplicity(self) -> int:
        """ν_0(F) = min(ν_0(a), ν_0(b))."""
        return int(min(self.a.order(), self.b.order()))

    def tangent_cone(self) -> BiPoly:
        """y a_m - x b_m for m = ν_0(F)."""
        m = self.multiplicity()
        return BiPoly.y() * self.a.homogeneous_part(m) - BiPoly.x() * self.b.homogeneous_part(m)

    def is_dicritical(self) -> bool:
        return self.tangent_cone().is_zero()

    def is_singular(self) -> bool:
        return self.multiplicity() >= 1

    def degree(self) -> int:
        return max(self.a.degree(), self.b.degree())

    # -- transformations ---------------------------------------------------

    def swapped(self) -> "VectorField":
        """The same field in the coordinates (y, x)."""
        return VectorField(self.b.swap(), self.a.swap())

    def translated(self, dx, dy) -> "VectorField":
        """The field in coordinates centred at (dx, dy)."""
        return VectorField(self.a.translate(dx, dy), self.b.translate(dx, dy))

    def saturated(self) -> "VectorField":
        """Remove common monomial factors of a and b."""
        kx = min(self.a.x_order(), self.b.x_order())
        ky = min(self.a.y_order(), self.b.y_order())
        a, b = self.a, self.b
        if kx and kx != INFINITY:
            a, b = a.divide_x(int(kx)), b.divide_x(int(kx))
        if ky and ky != INFINITY:
            a, b = a.divide_y(int(ky)), b.divide_y(int(ky))
        return VectorField(a, b)

    def saturated_at_origin(self) -> "VectorField":
        """
        Divide a and b by every common factor through the origin.

        Fields read from user input go through this before any transform;
        ν_0 and every index are only meaningful for the saturated field.
        """
        h = common_factor_at_origin(self.a, self.b)
        if h is None:
            return self
        logger.warning(f"Foliation coefficients share the factor {h} at the origin; dividing it out")
        return VectorField(_exact_quotient(self.a, h), _exact_quotient(self.b, h))

    def exceptional_power(self) -> int:
        """Power of the exceptional equation divided out on blowing up the origin."""
        m = self.multiplicity()
        return m if self.is_dicritical() else m - 1

    def chart(self, kind: str, v0: Scalar = 0) -> "VectorField":
        """
        Strict transform in a blow-up chart of the origin.

        Args:
            kind: "x" for (u, u v) or "y" for (u v, u)
            v0: Translate the result to the point v = v0 of the divisor

        Returns:
            VectorField: The saturated transform in coordinates (u, v - v0)
        """
        if kind not in AXES:
            raise ValueError(f"unknown chart {kind!r}")
        base = self if kind == "x" else self.swapped()
        e = self.exceptional_power()
        a1 = base.a.chart_x_map()
        b1 = base.b.chart_x_map()
        num = b1 - BiPoly.y() * a1
        result = VectorField(_shift_x(a1, e), _shift_x(num, e + 1))
        return result.translated(0, v0) if v0 else result

    def ramified(self, n: int) -> "VectorField":
        """Pull back by (u, y) -> (u^n, y) and saturate."""
        if n == 1:
            return self
        a = self.a.ramify_x(n)
        b = self.b.ramify_x(n).mul_x(n - 1).scale(n)
        return VectorField(a, b).saturated()

    # -- evaluation --------------------------------------------------------

    def along(self, germ: BranchGerm) -> Tuple[USeries, USeries]:
        """(a, b) evaluated along a parametrization."""
        return poly_eval_series(self.a, germ.x, germ.y), poly_eval_series(self.b, germ.x, germ.y)

    def apply(self, f: BiPoly) -> BiPoly:
        """X(f) = a f_x + b f_y."""
        return self.a * f.diff_x() + self.b * f.diff_y()

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    __hash__ = None

    def __repr__(self) -> str:
        return f"VectorField(a={self.a}, b={self.b})"


# ----------------------------------------------------------------------------
# Restrictions to local axes
# ----------------------------------------------------------------------------

def axis_index(field: VectorField, axis: str, invariant: bool) -> int:
    """
    Z (invariant axis) or tang (non-invariant axis) of the field at the origin along a local axis.

    Axis "x" is the curve {x = 0}, axis "y" the curve {y = 0}.
    """
    if axis == "x":
        tangential, normal = field.b.restrict_x_zero(), field.a.restrict_x_zero()
    elif axis == "y":
        tangential, normal = field.a.restrict_y_zero(), field.b.restrict_y_zero()
    else:
        raise ValueError(f"unknown axis {axis!r}")
    if invariant:
        if not normal.is_zero():
            raise NotInvariant(f"axis {axis} is not invariant for {field}")
        return int(tangential.order())
    if normal.is_zero():
        raise NotInvariant(f"axis {axis} is invariant for {field}")
    return int(normal.order())


def axis_is_invariant(field: VectorField, axis: str) -> bool:
    normal = field.a.restrict_x_zero() if axis == "x" else field.b.restrict_y_zero()
    return normal.is_zero()


def divisor_restrictions(field: VectorField) -> Tuple[USeries, USeries, bool]:
    """
    The univariate polynomials whose zeros count the indices on the first exceptional divisor.

    Returns:
        (R_X, R_Y, dicritical): zeros of R_X over the chart "x" part, and ord_0 of
        R_Y at the point of the divisor seen only from chart "y"
    """
    m = field.multiplicity()
    am = field.a.homogeneous_part(m)
    bm = field.b.homogeneous_part(m)
    dicritical = field.is_dicritical()
    if dicritical:
        return am.dehomogenize_x(), bm.dehomogenize_y(), True
    r_x = bm.dehomogenize_x() - am.dehomogenize_x().shift(1)
    r_y = am.dehomogenize_y() - bm.dehomogenize_y().shift(1)
    return r_x, r_y, False


def divisor_index_sum(field: VectorField) -> int:
    """Σ_P Z_P (non-dicritical) or Σ_P tang_P (dicritical) over the first exceptional divisor."""
    r_x, r_y, _ = divisor_restrictions(field)
    return r_x.degree() + int(r_y.order())


# ----------------------------------------------------------------------------
# Germs
# ----------------------------------------------------------------------------

def blowup_germ(germ: BranchGerm, precision: int) -> Tuple[str, Scalar, BranchGerm]:
    """
    Strict transform of a germ under the blow-up of the origin.

    Returns:
        (kind, v0, germ): chart used, divisor point, germ in the coordinates of that point

    Raises:
        TruncationInsufficient: If a needed coefficient lies beyond the known precision
    """
    ox, oy = germ.orders()
    try:
        if ox <= oy:
            v = germ.y.divide(germ.x, precision)
            v0 = v.coefficient(0)
            return "x", v0, BranchGerm(germ.name, germ.x, v - v0 if v0 else v)
        return "y", 0, BranchGerm(germ.name, germ.y, germ.x.divide(germ.y, precision))
    except OrderBeyondTruncation as e:
        raise TruncationInsufficient(f"blowing up {germ.name}: {e}") from e


def germ_tangent_to_axis(germ: BranchGerm, axis: str) -> bool:
    """True if the germ meets the axis with contact above one."""
    ox, oy = germ.orders()
    return (ox if axis == "x" else oy) > 1


def germ_is_invariant(field: VectorField, germ: BranchGerm) -> bool:
    """X tangent to the germ: b x' - a y' vanishes through its known order."""
    a, b = field.along(germ)
    residue = b * germ.x.derivative() - a * germ.y.derivative()
    return not residue.coeffs


def pullback_coefficient(field: VectorField, germ: BranchGerm, precision: int) -> USeries:
    """
    h(t) with α*X = h(t) ∂/∂t for the parametrization α of an invariant germ.

    Raises:
        NotInvariant: If X is not tangent to the germ
    """
    a, b = field.along(germ)
    dx, dy = germ.x.derivative(), germ.y.derivative()
    try:
        if dx.lower_bound() <= dy.lower_bound():
            h = a.divide(dx, precision)
            residue = b - dy * h
        else:
            h = b.divide(dy, precision)
            residue = a - dx * h
    except ValueError as e:
        raise NotInvariant(f"{germ.name} is not invariant: {e}") from e
    if residue.coeffs:
        raise NotInvariant(f"{germ.name} is not invariant: b x' - a y' does not vanish")
    return h


def germ_through_origin(germ: BranchGerm) -> None:
    ox, oy = germ.orders()
    if ox < 1 or oy < 1:
        raise InvalidBranch(f"germ {germ.name} does not pass through the origin")
