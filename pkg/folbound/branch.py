"""
Puiseux branches and their classical invariants.

A horizontal branch is parametrized as (t^n, c(t)); a vertical one as
(c(t), t^n). The module computes characteristic exponents, multiplicity
sequences, δ, the ramified smooth lifts used by the jet tree, implicit
equations and intersection multiplicities.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import (
    INFINITY,
    BiPoly,
    CycloField,
    CycloNum,
    USeries,
    poly_eval_series,
)
from .errors import (
    ConsistencyError,
    FieldTooSmall,
    InvalidBranch,
    OrderBeyondTruncation,
    TruncationInsufficient,
)
from .utils.logger import get_logger

logger = get_logger(__name__)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def scalar_field_order(value) -> int:
    """Smallest N with the value in Q(ζ_N) as stored (1 for rationals)."""
    if isinstance(value, CycloNum) and not value.is_rational():
        return value.order
    return 1


def series_field_order(s: USeries) -> int:
    return reduce(_lcm, (scalar_field_order(c) for c in s.coeffs.values()), 1)


class BranchGerm:
    """
    A parametrized germ (x(t), y(t)) through the origin.

    This is the form in which strict transforms travel through the
    blow-up engine.
    """

    __slots__ = ("name", "x", "y")

    def __init__(self, name: str, x: USeries, y: USeries):
        self.name = name
        self.x = x
        self.y = y

    def orders(self) -> Tuple[float, float]:
        try:
            return self.x.order(), self.y.order()
        except OrderBeyondTruncation as e:
            raise TruncationInsufficient(f"germ {self.name}: {e}") from e

    def multiplicity(self) -> int:
        ox, oy = self.orders()
        m = min(ox, oy)
        if m == INFINITY:
            raise InvalidBranch(f"germ {self.name} is constant")
        return int(m)

    def swapped(self) -> "BranchGerm":
        return BranchGerm(self.name, self.y, self.x)

    def __repr__(self) -> str:
        return f"BranchGerm({self.name}: x={self.x!r}, y={self.y!r})"


class PuiseuxBranch:
    """
    An irreducible branch in Puiseux normal form.

    Args:
        name: Identifier used in reports
        n: Multiplicity of the t^n coordinate
        c: The other coordinate; exact or truncated at ``known_order``
        vertical: If True the branch is (c(t), t^n) instead of (t^n, c(t))

    Raises:
        InvalidBranch: If the parametrization is not primitive or not in normal form
        TruncationInsufficient: If a truncated c does not determine the characteristic data
    """

    def __init__(self, name: str, n: int, c: USeries, vertical: bool = False):
        if not isinstance(n, int) or n < 1:
            raise InvalidBranch(f"branch {name}: multiplicity must be a positive integer, got {n!r}")
        self.name = name
        self.n = n
        self.c = c
        self.vertical = vertical
        self._invariants: Optional["BranchInvariants"] = None
        self._validate()

    @classmethod
    def from_terms(
        cls,
        name: str,
        n: int,
        terms: Iterable[Tuple[int, object]],
        known_order: float = INFINITY,
        vertical: bool = False,
    ) -> "PuiseuxBranch":
        return cls(name, n, USeries.from_terms(terms, known_order), vertical=vertical)

    def _validate(self):
        exps = sorted(self.c.coeffs)
        if exps and exps[0] < self.n:
            raise InvalidBranch(
                f"branch {self.name}: ord(c) = {exps[0]} < n = {self.n}; "
                f"the tangent would be the t^n axis, use the other orientation"
            )
        if not exps and not self.c.is_exact and self.c.known_order < self.n:
            raise TruncationInsufficient(f"branch {self.name}: c is not known through t^{self.n}")
        g = self.n
        for e in exps:
            g = math.gcd(g, e)
        if g != 1:
            if self.c.is_exact:
                raise InvalidBranch(
                    f"branch {self.name}: gcd of n and the exponents of c is {g}; "
                    f"the parametrization is not primitive"
                )
            raise TruncationInsufficient(
                f"branch {self.name}: truncation at t^{self.c.known_order} does not reach the last characteristic exponent"
            )

    @property
    def multiplicity(self) -> int:
        return self.n

    @property
    def is_smooth(self) -> bool:
        return self.n == 1

    @property
    def is_exact(self) -> bool:
        return self.c.is_exact

    def tn(self) -> USeries:
        return USeries.monomial(1, self.n)

    def germ(self) -> BranchGerm:
        if self.vertical:
            return BranchGerm(self.name, self.c, self.tn())
        return BranchGerm(self.name, self.tn(), self.c)

    def x_series(self) -> USeries:
        return self.germ().x

    def y_series(self) -> USeries:
        return self.germ().y

    def field_order(self) -> int:
        return series_field_order(self.c)

    def invariants(self) -> "BranchInvariants":
        if self._invariants is None:
            self._invariants = branch_invariants(self)
        return self._invariants

    def same_curve(self, other: "PuiseuxBranch") -> bool:
        return (
            self.n == other.n
            and self.vertical == other.vertical
            and self.c == other.c
        )

    def __repr__(self) -> str:
        kind = "vertical " if self.vertical else ""
        return f"PuiseuxBranch({self.name}: {kind}n={self.n}, c={self.c!r})"


@dataclass(frozen=True)
class BranchInvariants:
    """Classical equisingularity data of one branch."""

    n: int
    genus: int
    betas: Tuple[int, ...]
    char_exps: Tuple[Fraction, ...]
    e_seq: Tuple[int, ...]
    q_seq: Tuple[int, ...]
    mult_seq: Tuple[int, ...]
    mu: int
    delta: int
    conductor: int

    def as_dict(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "genus": self.genus,
            "betas": list(self.betas),
            "char_exps": [str(q) for q in self.char_exps],
            "e_seq": list(self.e_seq),
            "q_seq": list(self.q_seq),
            "mult_seq": list(self.mult_seq),
            "mu": self.mu,
            "delta": self.delta,
            "conductor": self.conductor,
        }


def _euclid_multiplicities(b: int, a: int) -> List[int]:
    out: List[int] = []
    while a:
        q, r = divmod(b, a)
        out.extend([a] * q)
        b, a = a, r
    return out


def branch_invariants(branch: PuiseuxBranch) -> BranchInvariants:
    """
    Characteristic exponents, gcd sequence, multiplicity sequence, μ and δ.

    Args:
        branch: A validated branch

    Returns:
        BranchInvariants: With char exponents β_i/n, q_i = n/e_i and μ = q_{g-1} (q_0 = 1)

    Raises:
        ConsistencyError: If δ from the multiplicity sequence disagrees with the conductor
    """
    n = branch.n
    betas: List[int] = []
    e_seq = [n]
    for e in sorted(branch.c.coeffs):
        if e % e_seq[-1]:
            betas.append(e)
            e_seq.append(math.gcd(e_seq[-1], e))
            if e_seq[-1] == 1:
                break
    genus = len(betas)
    q_seq = tuple(n // e for e in e_seq[1:])
    char_exps = tuple(Fraction(b, n) for b in betas)
    mu = 1 if genus <= 1 else q_seq[genus - 2]

    if genus == 0:
        mult_seq: List[int] = [1]
    else:
        mult_seq = []
        prev = 0
        for i, beta in enumerate(betas):
            mult_seq.extend(_euclid_multiplicities(beta - prev, e_seq[i]))
            prev = beta

    delta = sum(m * (m - 1) // 2 for m in mult_seq)
    conductor = sum((e_seq[i] - e_seq[i + 1]) * betas[i] for i in range(genus)) - n + 1
    if conductor != 2 * delta:
        raise ConsistencyError(
            f"branch {branch.name}: conductor {conductor} differs from 2*delta = {2 * delta}"
        )
    logger.debug(f"Invariants of {branch.name}: betas={betas}, e={e_seq}, mult={mult_seq}, mu={mu}")
    return BranchInvariants(
        n=n,
        genus=genus,
        betas=tuple(betas),
        char_exps=char_exps,
        e_seq=tuple(e_seq),
        q_seq=q_seq,
        mult_seq=tuple(mult_seq),
        mu=mu,
        delta=delta,
        conductor=conductor,
    )


# ----------------------------------------------------------------------------
# Ramified lifts
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class LiftedSeries:
    """One smooth branch u -> (u, s(u)) of the ramified curve."""

    index: int
    branch: str
    conjugate: int
    series: USeries

    @property
    def label(self) -> str:
        return f"{self.branch}[{self.conjugate}]"


class SmoothBranchSet:
    """
    The set 𝔠 of smooth branches obtained by pulling a curve back through x -> x^n.

    Args:
        lifts: One entry per conjugate parametrization, indexed from 0
        ramification: n, the lcm of the branch multiplicities
        field: The coefficient field the series live in
    """

    def __init__(self, lifts: Sequence[LiftedSeries], ramification: int, field: CycloField):
        self.lifts = list(lifts)
        self.ramification = ramification
        self.field = field

    @property
    def series(self) -> List[USeries]:
        return [lift.series for lift in self.lifts]

    def __len__(self) -> int:
        return len(self.lifts)

    def __iter__(self):
        return iter(self.lifts)

    def __getitem__(self, k: int) -> LiftedSeries:
        return self.lifts[k]

    def origin(self, k: int) -> Tuple[str, int]:
        lift = self.lifts[k]
        return lift.branch, lift.conjugate

    def contact_matrix(self) -> List[List[float]]:
        """Pairwise contact orders ord(s_a - s_b), INFINITY on the diagonal."""
        size = len(self.lifts)
        matrix = [[INFINITY] * size for _ in range(size)]
        for a in range(size):
            for b in range(a + 1, size):
                matrix[a][b] = matrix[b][a] = contact_order(self.lifts[a].series, self.lifts[b].series)
        return matrix


def contact_order(s_a: USeries, s_b: USeries) -> float:
    """ord(s_a - s_b); TruncationInsufficient if the difference vanishes through the known precision."""
    diff = s_a - s_b
    try:
        return diff.order()
    except OrderBeyondTruncation as e:
        raise TruncationInsufficient(f"series agree through t^{diff.known_order}: {e}") from e


def _conjugate_lifts(branch: PuiseuxBranch, ramification: int, field: CycloField) -> List[USeries]:
    c = USeries({e: field.coerce(v) for e, v in branch.c.coeffs.items()}, branch.c.known_order)
    step = ramification // branch.n
    N = field.order
    return [c.substitute_scaled(field.zeta(l * N // branch.n), step) for l in range(branch.n)]


def ramified_lift(branches: Sequence[PuiseuxBranch], field: Optional[CycloField] = None) -> SmoothBranchSet:
    """
    All conjugate parametrizations of the branches after the ramification x -> x^n.

    Args:
        branches: Horizontal branches
        field: Coefficient field; defaults to Q(ζ_N) with N the lcm of multiplicities
            and coefficient orders

    Returns:
        SmoothBranchSet: Σ n_j series s(u) = c_j(ζ_N^(l N / n_j) u^(n / n_j))

    Raises:
        FieldTooSmall: If n does not divide the field order
        InvalidBranch: For vertical branches or repeated branches
    """
    if not branches:
        raise InvalidBranch("no branches supplied")
    for b in branches:
        if b.vertical:
            raise InvalidBranch(f"branch {b.name} is vertical; ramification needs (t^n, c(t)) branches")
    n = reduce(_lcm, (b.n for b in branches), 1)
    if field is None:
        field = CycloField(reduce(_lcm, (b.field_order() for b in branches), n))
    if field.order % n:
        raise FieldTooSmall(
            f"ramification order {n} does not divide the cyclotomic order {field.order}"
        )
    lifts: List[LiftedSeries] = []
    for b in branches:
        for l, s in enumerate(_conjugate_lifts(b, n, field)):
            lifts.append(LiftedSeries(index=len(lifts), branch=b.name, conjugate=l, series=s))
    for a in range(len(lifts)):
        for b in range(a + 1, len(lifts)):
            if lifts[a].series.is_exact and lifts[a].series == lifts[b].series:
                raise InvalidBranch(f"{lifts[a].label} and {lifts[b].label} coincide; branches must be distinct")
    logger.debug(f"Ramified lift: n={n}, field order {field.order}, {len(lifts)} smooth branches")
    return SmoothBranchSet(lifts, n, field)


def truncation_audit(lifted: SmoothBranchSet, audit_order: Optional[int] = None) -> int:
    """
    Check that every pair of lifts separates strictly below every known order.

    Args:
        lifted: The smooth branch set
        audit_order: Optional extra bound the separation must stay below

    Returns:
        int: The maximal pairwise contact order

    Raises:
        TruncationInsufficient: If some pair is not provably separated
    """
    worst = 0
    for row in lifted.contact_matrix():
        for value in row:
            if value != INFINITY:
                worst = max(worst, int(value))
    bound = min(s.known_order for s in lifted.series)
    if audit_order is not None:
        bound = min(bound, audit_order)
    if worst >= bound:
        raise TruncationInsufficient(f"branches separate at order {worst}, not below the audit bound {bound}")
    return worst


# ----------------------------------------------------------------------------
# Implicit equations and intersection multiplicities
# ----------------------------------------------------------------------------

def _natural_field(branch: PuiseuxBranch, field: Optional[CycloField]) -> CycloField:
    if field is not None:
        return field
    order = branch.field_order()
    return CycloField(order if order > 2 else 1)


def implicitize(branch: PuiseuxBranch, field: Optional[CycloField] = None) -> BiPoly:
    """
    Reduced equation of a branch, monic in the non-parameter coordinate.

    Computes Π_l (y - c(ζ_n^l u)) over Q(ζ_lcm(N, n)) and rewrites u^(kn) as x^k,
    then descends the coefficients to ``field``. Up to sign this product is
    the resultant res_u(x - u^n, y - c(u)), the conjugates ζ_n^l u being the
    roots of x - u^n.

    Raises:
        TruncationInsufficient: For branches with truncated series
        FieldTooSmall: If the coefficients do not lie in ``field``
        ConsistencyError: If the product is not a polynomial in u^n
    """
    if not branch.is_exact:
        raise TruncationInsufficient(f"branch {branch.name} is truncated; its implicit equation is not exact")
    target = _natural_field(branch, field)
    if branch.vertical:
        flat = PuiseuxBranch(branch.name, branch.n, branch.c)
        return implicitize(flat, target).swap()
    work = CycloField(_lcm(_lcm(target.order, branch.n), branch.field_order()))
    c = USeries({e: work.coerce(v) for e, v in branch.c.coeffs.items()})
    conj = [c.substitute_scaled(work.zeta(l * work.order // branch.n), 1) for l in range(branch.n)]
    # polynomial in y with series coefficients, constant term first
    poly: List[USeries] = [USeries.constant(1)]
    for s in conj:
        nxt = [USeries.zero() for _ in range(len(poly) + 1)]
        for k, coef in enumerate(poly):
            nxt[k + 1] = nxt[k + 1] + coef
            nxt[k] = nxt[k] - coef * s
        poly = nxt
    terms = {}
    for j, coef in enumerate(poly):
        for e, v in coef.coeffs.items():
            if e % branch.n:
                raise ConsistencyError(f"implicitization of {branch.name} left u^{e}")
            terms[(e // branch.n, j)] = target.coerce(v)
    f = BiPoly(terms)
    if not poly_eval_series(f, branch.x_series(), branch.y_series()).is_zero():
        raise ConsistencyError(f"implicit equation of {branch.name} does not vanish on it")
    return f


def reduced_equation(branches: Sequence[PuiseuxBranch], field: Optional[CycloField] = None) -> BiPoly:
    """Product of the implicit equations of distinct branches."""
    f = BiPoly.constant(1)
    for b in branches:
        f = f * implicitize(b, field)
    return f


def _ramified_intersection(gamma: PuiseuxBranch, delta: PuiseuxBranch) -> Fraction:
    n = _lcm(gamma.n, delta.n)
    field = CycloField(_lcm(_lcm(n, gamma.field_order()), delta.field_order()))
    total = 0
    for s_a in _conjugate_lifts(gamma, n, field):
        for s_b in _conjugate_lifts(delta, n, field):
            total += contact_order(s_a, s_b)
    return Fraction(total, n)


def intersection_multiplicity(gamma: PuiseuxBranch, delta: PuiseuxBranch):
    """
    Intersection multiplicity (γ·δ) of two branches.

    Evaluates the implicit equation of δ along γ and, for horizontal exact
    pairs, cross-checks against (1/n) Σ ord_u(s_a - s_b) over conjugate lifts.

    Returns:
        int, or INFINITY when both describe the same branch

    Raises:
        ConsistencyError: If the two computations disagree
    """
    if gamma.same_curve(delta):
        return INFINITY
    f = implicitize(delta)
    value = poly_eval_series(f, gamma.x_series(), gamma.y_series())
    try:
        order = value.order()
    except OrderBeyondTruncation as e:
        raise TruncationInsufficient(f"({gamma.name}.{delta.name}) exceeds the truncation of {gamma.name}") from e
    if order == INFINITY:
        return INFINITY
    if not gamma.vertical and not delta.vertical and gamma.is_exact:
        check = _ramified_intersection(gamma, delta)
        if check != order:
            raise ConsistencyError(
                f"({gamma.name}.{delta.name}): implicit evaluation gives {order}, ramified sum gives {check}"
            )
    return int(order)
