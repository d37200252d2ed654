"""
Exact coefficient arithmetic for folbound.

Scalars are Fractions when the instance field is Q (or Q(ζ_2) = Q) and
CycloNum elements of Q(ζ_N) otherwise. On top of them live truncation-aware
univariate series (USeries) and sparse bivariate polynomials (BiPoly).
Every series carries the order up to which it is exact; operations propagate
that bound so that an order query is either certain or raises.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import CompositionDivergent, FieldTooSmall, OrderBeyondTruncation
from .utils.logger import get_logger

logger = get_logger(__name__)

INFINITY = math.inf


# ----------------------------------------------------------------------------
# Cyclotomic polynomials
# ----------------------------------------------------------------------------

def _proper_divisors(n: int) -> List[int]:
    return [d for d in range(1, n) if n % d == 0]


def _exact_div_monic(num: List[int], den: Sequence[int]) -> List[int]:
    """Divide integer polynomials (low to high) by a monic divisor, demanding no remainder."""
    num = list(num)
    dl = len(den) - 1
    quot = [0] * (len(num) - dl)
    for k in range(len(num) - 1, dl - 1, -1):
        c = num[k]
        if c:
            quot[k - dl] = c
            for i, d in enumerate(den):
                num[k - dl + i] -= c * d
    if any(num[:dl]):
        raise ArithmeticError("cyclotomic division left a remainder")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(order: int) -> Tuple[int, ...]:
    """
    Integer coefficients (low to high) of the cyclotomic polynomial Φ_N.

    Obtained by dividing x^N - 1 by Φ_d for every proper divisor d of N.

    Args:
        order: N >= 1

    Returns:
        tuple: Coefficients of Φ_N, constant term first
    """
    if order < 1:
        raise ValueError(f"cyclotomic order must be positive, got {order}")
    poly = [-1] + [0] * (order - 1) + [1]
    for d in _proper_divisors(order):
        poly = _exact_div_monic(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def totient(order: int) -> int:
    return len(cyclotomic_polynomial(order)) - 1


def _reduce_mod_cyclotomic(coeffs: Sequence, order: int) -> Tuple[Fraction, ...]:
    phi = cyclotomic_polynomial(order)
    deg = len(phi) - 1
    r = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
    for k in range(len(r) - 1, deg - 1, -1):
        c = r[k]
        if c:
            base = k - deg
            for i in range(deg + 1):
                if phi[i]:
                    r[base + i] -= c * phi[i]
    r = r[:deg]
    if len(r) < deg:
        r.extend([Fraction(0)] * (deg - len(r)))
    return tuple(r)


# Plain rational polynomial helpers (lists, constant term first).

def _trim(p: List[Fraction]) -> List[Fraction]:
    while p and not p[-1]:
        p.pop()
    return p


def _pdivmod(num: List[Fraction], den: List[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    num = _trim(list(num))
    den = _trim(list(den))
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    dl = len(den) - 1
    lead = den[-1]
    if len(num) - 1 < dl:
        return [], num
    quot = [Fraction(0)] * (len(num) - dl)
    for k in range(len(num) - 1, dl - 1, -1):
        c = num[k]
        if c:
            q = c / lead
            quot[k - dl] = q
            for i, d in enumerate(den):
                num[k - dl + i] -= q * d
    return _trim(quot), _trim(num[:dl])


def _pmul(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _psub(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([Fraction(x) for x in out])


# ----------------------------------------------------------------------------
# CycloNum
# ----------------------------------------------------------------------------

class CycloNum:
    """
    An element of Q(ζ_N), stored as its canonical residue modulo Φ_N.

    Interoperates with int and Fraction. Elements of different orders are
    embedded into the field of the lcm before combining.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence = ()):
        if order < 1:
            raise ValueError(f"cyclotomic order must be positive, got {order}")
        self.order = order
        self.coeffs = _reduce_mod_cyclotomic(coeffs, order)

    @classmethod
    def from_rational(cls, value, order: int) -> "CycloNum":
        return cls(order, [Fraction(value)])

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "CycloNum":
        k = power % order
        return cls(order, [0] * k + [1])

    # -- structure ---------------------------------------------------------

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise FieldTooSmall(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def embed(self, order: int) -> "CycloNum":
        """Image under Q(ζ_N) -> Q(ζ_M), ζ_N -> ζ_M^(M/N)."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot embed Q(zeta_{self.order}) into Q(zeta_{order})")
        step = order // self.order
        rep = [Fraction(0)] * ((len(self.coeffs) - 1) * step + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            rep[i * step] = c
        return CycloNum(order, rep)

    def _pair(self, other):
        if isinstance(other, CycloNum):
            if other.order == self.order:
                return self, other
            m = self.order * other.order // math.gcd(self.order, other.order)
            return self.embed(m), other.embed(m)
        if isinstance(other, (int, Fraction)):
            return self, CycloNum.from_rational(other, self.order)
        return None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloNum(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.order, [-x for x in self.coeffs])

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloNum(a.order, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloNum(a.order, [y - x for x, y in zip(a.coeffs, b.coeffs)])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNum(self.order, [x * other for x in self.coeffs])
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        prod = [Fraction(0)] * (2 * len(a.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycloNum(a.order, prod)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        """Multiplicative inverse via the extended Euclidean algorithm against Φ_N."""
        if not self:
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        modulus = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        r0, r1 = modulus, _trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        c = r1[0]
        return CycloNum(self.order, [x / c for x in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return CycloNum(self.order, [x / other for x in self.coeffs])
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b * a.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloNum.from_rational(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison --------------------------------------------------------

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, CycloNum):
            a, b = self._pair(other)
            return a.coeffs == b.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        # Rational values hash like the Fraction they equal.
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"CycloNum({self.order}, {format_scalar(self)})"

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


Scalar = Union[Fraction, CycloNum]


def cyclo_normalize(poly_coeffs: Sequence, order: int) -> CycloNum:
    """
    Canonical residue of a polynomial in ζ modulo Φ_N.

    Args:
        poly_coeffs: Rational coefficients of a representative, constant term first
        order: N >= 1

    Returns:
        CycloNum: The reduced element
    """
    return CycloNum(order, poly_coeffs)


def as_scalar(value) -> Scalar:
    if isinstance(value, (Fraction, CycloNum)):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"not an exact scalar: {value!r}")


def is_rational_scalar(value) -> bool:
    return not isinstance(value, CycloNum) or value.is_rational()


def scalar_to_fraction(value) -> Fraction:
    if isinstance(value, CycloNum):
        return value.to_fraction()
    return Fraction(value)


def format_scalar(value) -> str:
    """Case-file literal for a scalar: "p/q" for rationals, "[a0, a1, ...]" otherwise."""
    if is_rational_scalar(value):
        return str(scalar_to_fraction(value))
    coeffs = list(value.coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return "[" + ", ".join(str(c) for c in coeffs) + "]"


def exact_number(value):
    """int for integral values, "p/q" for other rationals; used in reports."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return "inf" if value == INFINITY else value
    q = Fraction(value)
    return q.numerator if q.denominator == 1 else str(q)


class CycloField:
    """
    The single coefficient field Q(ζ_N) of a problem instance.

    Orders 1 and 2 give Q itself and use Fraction scalars.
    """

    def __init__(self, order: int = 1):
        if order < 1:
            raise ValueError(f"cyclotomic order must be positive, got {order}")
        self.order = order

    @property
    def rational(self) -> bool:
        return self.order <= 2

    @property
    def degree(self) -> int:
        return totient(self.order)

    def zero(self) -> Scalar:
        return self.coerce(0)

    def one(self) -> Scalar:
        return self.coerce(1)

    def zeta(self, power: int = 1) -> Scalar:
        """ζ_N^power."""
        if self.order == 1:
            return Fraction(1)
        if self.order == 2:
            return Fraction(-1) if power % 2 else Fraction(1)
        return CycloNum.zeta(self.order, power)

    def contains_roots_of_unity(self, n: int) -> bool:
        return self.order % n == 0

    def coerce(self, value) -> Scalar:
        """
        Bring a value into this field.

        Args:
            value: int, Fraction, CycloNum, or a sequence of rationals read as
                coefficients of powers of ζ_N (constant term first)

        Returns:
            Scalar: Fraction for rational fields, CycloNum otherwise

        Raises:
            FieldTooSmall: If the value does not lie in this field
        """
        if isinstance(value, (list, tuple)):
            acc: Scalar = Fraction(0)
            for k, c in enumerate(value):
                if c:
                    acc = acc + Fraction(c) * self.zeta(k)
            return self.coerce(acc)
        if isinstance(value, (int, Fraction)):
            return Fraction(value) if self.rational else CycloNum.from_rational(value, self.order)
        if isinstance(value, CycloNum):
            if value.is_rational():
                return self.coerce(value.to_fraction())
            if self.rational:
                raise FieldTooSmall(f"{value} is not rational")
            if self.order % value.order == 0:
                return value.embed(self.order)
            if value.order % self.order == 0:
                return self.descend(value)
            return self.descend(value.embed(value.order * self.order // math.gcd(value.order, self.order)))
        raise TypeError(f"cannot coerce {value!r} into Q(zeta_{self.order})")

    def descend(self, value: CycloNum) -> CycloNum:
        """
        Express an element of a larger cyclotomic field in this one.

        Solves the linear system given by the embedding of this field's
        power basis.

        Raises:
            FieldTooSmall: If the value is not in the image of the embedding
        """
        big = value.order
        if big % self.order:
            raise FieldTooSmall(f"Q(zeta_{self.order}) is not a subfield of Q(zeta_{big})")
        basis = [CycloNum.zeta(self.order, i).embed(big).coeffs for i in range(self.degree)]
        rows = len(value.coeffs)
        cols = len(basis)
        # augmented matrix rows: coefficient index of the big field
        matrix = [[basis[c][r] for c in range(cols)] + [value.coeffs[r]] for r in range(rows)]
        pivots = []
        row = 0
        for col in range(cols):
            pivot = next((r for r in range(row, rows) if matrix[r][col]), None)
            if pivot is None:
                continue
            matrix[row], matrix[pivot] = matrix[pivot], matrix[row]
            lead = matrix[row][col]
            matrix[row] = [x / lead for x in matrix[row]]
            for r in range(rows):
                if r != row and matrix[r][col]:
                    f = matrix[r][col]
                    matrix[r] = [x - f * y for x, y in zip(matrix[r], matrix[row])]
            pivots.append(col)
            row += 1
        if any(matrix[r][cols] for r in range(row, rows)):
            raise FieldTooSmall(f"{value} does not lie in Q(zeta_{self.order})")
        solution = [Fraction(0)] * cols
        for r, col in enumerate(pivots):
            solution[col] = matrix[r][cols]
        return CycloNum(self.order, solution)

    def __eq__(self, other) -> bool:
        return isinstance(other, CycloField) and other.order == self.order

    def __hash__(self) -> int:
        return hash(("CycloField", self.order))

    def __repr__(self) -> str:
        return f"CycloField({self.order})"


# ----------------------------------------------------------------------------
# Truncated univariate series
# ----------------------------------------------------------------------------

def _min_known(*values: float) -> float:
    return min(values)


class USeries:
    """
    A univariate power series in t, exact through ``known_order``.

    ``known_order`` is ``INFINITY`` for exact polynomials. Stored exponents
    never exceed it and zero coefficients are never stored.
    """

    __slots__ = ("coeffs", "known_order")

    def __init__(self, coeffs: Optional[Mapping[int, object]] = None, known_order: float = INFINITY):
        if known_order != INFINITY:
            known_order = max(int(known_order), -1)
        clean: Dict[int, Scalar] = {}
        for e, c in (coeffs or {}).items():
            if e < 0:
                raise ValueError(f"negative exponent {e} in series")
            if e <= known_order and c:
                clean[int(e)] = as_scalar(c)
        self.coeffs = clean
        self.known_order = known_order

    @classmethod
    def zero(cls) -> "USeries":
        return cls({}, INFINITY)

    @classmethod
    def constant(cls, c) -> "USeries":
        return cls({0: c})

    @classmethod
    def monomial(cls, c, e: int) -> "USeries":
        return cls({e: c})

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[int, object]], known_order: float = INFINITY) -> "USeries":
        acc: Dict[int, Scalar] = {}
        for e, c in terms:
            acc[e] = acc.get(e, Fraction(0)) + as_scalar(c)
        return cls(acc, known_order)

    # -- queries -----------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.known_order == INFINITY

    def is_zero(self) -> bool:
        """True only for the exactly-zero series."""
        return not self.coeffs and self.is_exact

    def order(self):
        """
        Order of the series.

        Returns:
            int or INFINITY for the exact zero series

        Raises:
            OrderBeyondTruncation: If every known coefficient vanishes but the series is truncated
        """
        if self.coeffs:
            return min(self.coeffs)
        if self.is_exact:
            return INFINITY
        raise OrderBeyondTruncation(
            f"series vanishes through t^{self.known_order}; its order is beyond the truncation"
        )

    def lower_bound(self) -> float:
        """A certain lower bound for the order (the order itself when known)."""
        if self.coeffs:
            return min(self.coeffs)
        return self.known_order + 1

    def coefficient(self, k: int) -> Scalar:
        if k > self.known_order:
            raise OrderBeyondTruncation(f"coefficient of t^{k} requested, series known through t^{self.known_order}")
        return self.coeffs.get(k, Fraction(0))

    def degree(self) -> int:
        """Degree of an exact polynomial (-1 for zero)."""
        if not self.is_exact:
            raise OrderBeyondTruncation("degree of a truncated series is unknown")
        return max(self.coeffs, default=-1)

    def leading_term(self) -> Tuple[int, Scalar]:
        e = self.order()
        return e, self.coeffs[e]

    def is_monomial(self) -> bool:
        return self.is_exact and len(self.coeffs) == 1

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _as_series(other)
        if other is None:
            return NotImplemented
        known = _min_known(self.known_order, other.known_order)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return USeries(out, known)

    __radd__ = __add__

    def __neg__(self):
        return USeries({e: -c for e, c in self.coeffs.items()}, self.known_order)

    def __sub__(self, other):
        other = _as_series(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_series(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "USeries":
        if not c:
            return USeries.zero()
        return USeries({e: c * v for e, v in self.coeffs.items()}, self.known_order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloNum)):
            return self.scale(other)
        if not isinstance(other, USeries):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return USeries.zero()
        known = _min_known(self.known_order + other.lower_bound(), other.known_order + self.lower_bound())
        out: Dict[int, Scalar] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e <= known:
                    out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return USeries(out, known)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "USeries":
        if k < 0:
            raise ValueError("negative powers of series are not supported")
        result = USeries.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def truncate(self, order: float) -> "USeries":
        return USeries(self.coeffs, _min_known(self.known_order, order))

    def derivative(self) -> "USeries":
        return USeries({e - 1: e * c for e, c in self.coeffs.items() if e}, self.known_order - 1)

    def shift(self, p: int) -> "USeries":
        """Multiply by t^p."""
        return USeries({e + p: c for e, c in self.coeffs.items()}, self.known_order + p)

    def divide_monomial(self, p: int) -> "USeries":
        """Divide by t^p; every stored exponent must be at least p."""
        if p == 0:
            return self
        if any(e < p for e in self.coeffs):
            raise ValueError(f"series is not divisible by t^{p}")
        return USeries({e - p: c for e, c in self.coeffs.items()}, self.known_order - p)

    def unit_inverse(self, precision: int) -> "USeries":
        """
        Inverse of a unit series.

        Exact for nonzero constants; otherwise known through
        min(known_order, precision).
        """
        u0 = self.coefficient(0)
        if not u0:
            raise ZeroDivisionError("series is not a unit")
        inv0 = 1 / u0
        if self.is_exact and len(self.coeffs) == 1:
            return USeries.constant(inv0)
        known = int(_min_known(self.known_order, precision))
        result: Dict[int, Scalar] = {0: inv0}
        terms = sorted((e, c) for e, c in self.coeffs.items() if e)
        for k in range(1, known + 1):
            acc = None
            for e, c in terms:
                if e > k:
                    break
                prev = result.get(k - e)
                if prev is not None:
                    acc = c * prev if acc is None else acc + c * prev
            if acc:
                result[k] = -acc * inv0
        return USeries(result, known)

    def divide(self, other: "USeries", precision: int) -> "USeries":
        """
        Quotient self / other as a power series.

        Exact when both are exact and ``other`` is a monomial; otherwise
        the inverse of the unit part is computed through ``precision``.
        """
        p = other.order()
        if p == INFINITY:
            raise ZeroDivisionError("division by the zero series")
        num = self.divide_monomial(p)
        den = other.divide_monomial(p)
        if den.is_exact and len(den.coeffs) == 1:
            return num.scale(1 / den.coeffs[0])
        return num * den.unit_inverse(precision)

    def compose(self, g: "USeries") -> "USeries":
        """f(g(t)) truncated to the provable precision."""
        return series_compose(self, g)

    def substitute_scaled(self, c, e: int) -> "USeries":
        """s(c * u^e), exact coefficient-wise."""
        if e < 1:
            raise ValueError("substitution exponent must be positive")
        out = {}
        for k in sorted(self.coeffs):
            out[k * e] = self.coeffs[k] * (c ** k if k else 1)
        known = INFINITY if self.is_exact else (self.known_order + 1) * e - 1
        return USeries(out, known)

    # -- comparison --------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, USeries):
            return NotImplemented
        return self.known_order == other.known_order and self.coeffs == other.coeffs

    def __hash__(self):
        raise TypeError("USeries is not hashable")

    def __repr__(self) -> str:
        terms = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            coef = format_scalar(c)
            if not mono:
                terms.append(coef)
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{coef}*{mono}")
        body = " + ".join(terms) if terms else "0"
        if not self.is_exact:
            body += f" + O(t^{self.known_order + 1})"
        return f"USeries({body})"


def _as_series(value) -> Optional[USeries]:
    if isinstance(value, USeries):
        return value
    if isinstance(value, (int, Fraction, CycloNum)):
        return USeries.constant(value)
    return None


def series_order(s: USeries):
    """Order of a series; INFINITY for the exact zero series."""
    return s.order()


def series_compose(f: USeries, g: USeries) -> USeries:
    """
    Composition f(g(t)).

    Raises:
        CompositionDivergent: If ord(g) = 0
    """
    if g.is_zero():
        return USeries.constant(f.coefficient(0))
    r = g.order()
    if r == 0:
        raise CompositionDivergent("cannot substitute a series with nonzero constant term")
    if f.is_zero():
        return USeries.zero()
    if f.is_exact and g.is_exact:
        known = INFINITY
    else:
        from_f = (f.known_order + 1) * r - 1
        from_g = g.known_order + max(f.lower_bound() - 1, 0) * r
        known = _min_known(from_f, from_g)
    result = USeries({0: f.coeffs[0]} if 0 in f.coeffs else {}, INFINITY)
    power = USeries.constant(1)
    top = max(f.coeffs)
    for k in range(1, top + 1):
        if k * r > known:
            break
        power = (power * g).truncate(known)
        c = f.coeffs.get(k)
        if c:
            result = result + power.scale(c)
    return result.truncate(known)


def poly_gcd(p: USeries, q: USeries) -> USeries:
    """Monic gcd of two exact univariate polynomials."""
    a, b = p, q
    while not b.is_zero():
        _, r = poly_divmod(a, b)
        a, b = b, r
    if a.is_zero():
        return a
    lead = a.coeffs[a.degree()]
    return a.scale(1 / lead)


def poly_divmod(p: USeries, q: USeries) -> Tuple[USeries, USeries]:
    """Euclidean division of exact univariate polynomials over the field."""
    if q.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    dq = q.degree()
    lead = q.coeffs[dq]
    rem = dict(p.coeffs)
    quot: Dict[int, Scalar] = {}
    while rem and max(rem) >= dq:
        top = max(rem)
        c = rem[top] / lead
        quot[top - dq] = c
        for e, v in q.coeffs.items():
            k = e + top - dq
            nv = rem.get(k, Fraction(0)) - c * v
            if nv:
                rem[k] = nv
            else:
                rem.pop(k, None)
    return USeries(quot), USeries(rem)


# ----------------------------------------------------------------------------
# Bivariate polynomials
# ----------------------------------------------------------------------------

Monomial = Tuple[int, int]


class BiPoly:
    """
    Sparse polynomial in x, y with exact coefficients.

    ``terms`` maps (i, j) to the coefficient of x^i y^j; zeros are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, object]] = None):
        self.terms: Dict[Monomial, Scalar] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in monomial x^{i} y^{j}")
            if c:
                self.terms[(int(i), int(j))] = as_scalar(c)

    @classmethod
    def from_list(cls, entries: Iterable[Tuple[int, int, object]]) -> "BiPoly":
        acc: Dict[Monomial, Scalar] = {}
        for i, j, c in entries:
            acc[(i, j)] = acc.get((i, j), Fraction(0)) + as_scalar(c)
        return cls(acc)

    @classmethod
    def x(cls) -> "BiPoly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BiPoly":
        return cls({(0, 1): 1})

    @classmethod
    def constant(cls, c) -> "BiPoly":
        return cls({(0, 0): c})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def order(self):
        """ν_0: lowest total degree, INFINITY for zero."""
        return min((i + j for i, j in self.terms), default=INFINITY)

    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def coefficient(self, i: int, j: int) -> Scalar:
        return self.terms.get((i, j), Fraction(0))

    def homogeneous_part(self, k: int) -> "BiPoly":
        return BiPoly({m: c for m, c in self.terms.items() if m[0] + m[1] == k})

    def x_order(self):
        return min((i for i, _ in self.terms), default=INFINITY)

    def y_order(self):
        return min((j for _, j in self.terms), default=INFINITY)

    def is_rational(self) -> bool:
        return all(is_rational_scalar(c) for c in self.terms.values())

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _as_bipoly(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return BiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = _as_bipoly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_bipoly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "BiPoly":
        return BiPoly({m: c * v for m, v in self.terms.items()}) if c else BiPoly()

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloNum)):
            return self.scale(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        out: Dict[Monomial, Scalar] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                m = (i1 + i2, j1 + j2)
                out[m] = out[m] + c1 * c2 if m in out else c1 * c2
        return BiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "BiPoly":
        result = BiPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        other = _as_bipoly(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    # -- calculus and substitutions ----------------------------------------

    def diff_x(self) -> "BiPoly":
        return BiPoly({(i - 1, j): i * c for (i, j), c in self.terms.items() if i})

    def diff_y(self) -> "BiPoly":
        return BiPoly({(i, j - 1): j * c for (i, j), c in self.terms.items() if j})

    def swap(self) -> "BiPoly":
        """Exchange the roles of x and y."""
        return BiPoly({(j, i): c for (i, j), c in self.terms.items()})

    def translate(self, dx, dy) -> "BiPoly":
        """Substitute x -> x + dx, y -> y + dy."""
        if not dx and not dy:
            return self
        out: Dict[Monomial, Scalar] = {}
        for (i, j), c in self.terms.items():
            xs = _binomial_expansion(i, dx)
            ys = _binomial_expansion(j, dy)
            for a, ca in xs:
                for b, cb in ys:
                    m = (a, b)
                    v = c * ca * cb
                    out[m] = out[m] + v if m in out else v
        return BiPoly(out)

    def chart_x_map(self) -> "BiPoly":
        """Pull back by (x, y) = (u, u v): x^i y^j -> u^(i+j) v^j."""
        return BiPoly({(i + j, j): c for (i, j), c in self.terms.items()})

    def divide_x(self, k: int) -> "BiPoly":
        if k == 0:
            return self
        if any(i < k for i, _ in self.terms):
            raise ValueError(f"polynomial is not divisible by x^{k}")
        return BiPoly({(i - k, j): c for (i, j), c in self.terms.items()})

    def divide_y(self, k: int) -> "BiPoly":
        return self.swap().divide_x(k).swap()

    def mul_x(self, k: int) -> "BiPoly":
        return BiPoly({(i + k, j): c for (i, j), c in self.terms.items()})

    def ramify_x(self, n: int) -> "BiPoly":
        """Substitute x -> x^n."""
        return BiPoly({(n * i, j): c for (i, j), c in self.terms.items()})

    def restrict_x_zero(self) -> USeries:
        """The polynomial in y obtained on the axis x = 0."""
        return USeries({j: c for (i, j), c in self.terms.items() if i == 0})

    def restrict_y_zero(self) -> USeries:
        """The polynomial in x obtained on the axis y = 0."""
        return USeries({i: c for (i, j), c in self.terms.items() if j == 0})

    def dehomogenize_x(self) -> USeries:
        """For a binary form h: h(1, v) as a polynomial in v."""
        return USeries({j: c for (i, j), c in self.terms.items()})

    def dehomogenize_y(self) -> USeries:
        """For a binary form h: h(v, 1) as a polynomial in v."""
        return USeries({i: c for (i, j), c in self.terms.items()})

    def evaluate(self, s1: USeries, s2: USeries) -> USeries:
        return poly_eval_series(self, s1, s2)

    def evaluate_point(self, x0, y0) -> Scalar:
        acc: Scalar = Fraction(0)
        for (i, j), c in self.terms.items():
            acc = acc + c * (x0 ** i if i else 1) * (y0 ** j if j else 1)
        return acc

    def __repr__(self) -> str:
        return f"BiPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, key=lambda m: (m[0] + m[1], -m[0])):
            c = self.terms[(i, j)]
            mono = "*".join(
                p for p in (
                    "" if i == 0 else ("x" if i == 1 else f"x^{i}"),
                    "" if j == 0 else ("y" if j == 1 else f"y^{j}"),
                ) if p
            )
            coef = format_scalar(c)
            if not mono:
                parts.append(coef)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{coef}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _as_bipoly(value) -> Optional[BiPoly]:
    if isinstance(value, BiPoly):
        return value
    if isinstance(value, (int, Fraction, CycloNum)):
        return BiPoly.constant(value)
    return None


def _binomial_expansion(n: int, shift) -> List[Tuple[int, Scalar]]:
    """Terms (k, C(n,k) shift^(n-k)) of (z + shift)^n."""
    if n == 0:
        return [(0, Fraction(1))]
    if not shift:
        return [(n, Fraction(1))]
    out = []
    for k in range(n + 1):
        out.append((k, math.comb(n, k) * (shift ** (n - k) if n - k else Fraction(1))))
    return out


def _power_list(s: USeries, top: int, cap: float) -> List[USeries]:
    powers = [USeries.constant(1)]
    for _ in range(top):
        powers.append((powers[-1] * s).truncate(cap))
    return powers


def _power_known(s: USeries, k: int) -> float:
    if k == 0:
        return INFINITY
    return s.known_order + (k - 1) * s.lower_bound()


def poly_eval_series(F: BiPoly, s1: USeries, s2: USeries) -> USeries:
    """
    F(s1(t), s2(t)) with the provable known order.

    Args:
        F: Polynomial to evaluate
        s1: Series substituted for x
        s2: Series substituted for y

    Returns:
        USeries: Known through the minimum over monomials of their guaranteed precision
    """
    if F.is_zero():
        return USeries.zero()
    low1, low2 = s1.lower_bound(), s2.lower_bound()
    known = INFINITY
    for (i, j) in F.terms:
        k1 = _power_known(s1, i) + (j * low2 if j else 0)
        k2 = _power_known(s2, j) + (i * low1 if i else 0)
        known = min(known, k1, k2)
    top_i = max(i for i, _ in F.terms)
    top_j = max(j for _, j in F.terms)
    pow1 = _power_list(s1, top_i, known)
    pow2 = _power_list(s2, top_j, known)
    acc = USeries.zero()
    for (i, j), c in F.terms.items():
        acc = acc + (pow1[i] * pow2[j]).scale(c)
    return acc.truncate(known)
