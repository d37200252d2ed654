"""
Tests for the exact arithmetic of folbound: cyclotomic numbers, series and bivariate polynomials.
"""

import random
from fractions import Fraction

import pytest
import sympy as sp

from folbound.algebra import (
    INFINITY,
    BiPoly,
    CycloField,
    CycloNum,
    USeries,
    cyclotomic_polynomial,
    exact_number,
    format_scalar,
    poly_divmod,
    poly_eval_series,
    poly_gcd,
    series_compose,
    totient,
)
from folbound.errors import CompositionDivergent, FieldTooSmall, OrderBeyondTruncation


def test_cyclotomic_polynomials_match_sympy():
    """Test Φ_N against sympy for the first thirty orders."""
    x = sp.Symbol("x")
    for order in range(1, 31):
        expected = tuple(int(c) for c in reversed(sp.Poly(sp.cyclotomic_poly(order, x), x).all_coeffs()))
        assert cyclotomic_polynomial(order) == expected
        assert totient(order) == len(expected) - 1


def test_zeta_powers_reduce_modulo_phi6():
    """Test that powers of ζ_6 reduce through x² - x + 1."""
    zeta = CycloNum.zeta(6)
    assert zeta ** 3 == -1
    assert zeta ** 6 == 1
    assert zeta ** 2 == CycloNum(6, [-1, 1])
    assert CycloNum(6, [0, 0, 1]) == zeta - 1


def test_cyclonum_inverse_and_division():
    """Test inversion against Φ_N."""
    zeta = CycloNum.zeta(6)
    assert zeta.inverse() == CycloNum.zeta(6, 5)
    value = CycloNum(12, [1, 2, 0, 3])
    assert value * value.inverse() == 1
    assert (value / value) == 1
    with pytest.raises(ZeroDivisionError):
        CycloNum(6, []).inverse()


def test_rational_cyclonum_behaves_like_fraction():
    """Test that rational cyclotomic numbers compare and hash like Fractions."""
    half = CycloNum.from_rational(Fraction(1, 2), 6)
    assert half.is_rational()
    assert half == Fraction(1, 2)
    assert hash(half) == hash(Fraction(1, 2))
    assert half.to_fraction() == Fraction(1, 2)


def test_field_coerce_and_descend():
    """Test moving values between Q(ζ_3), Q(ζ_6) and Q."""
    f3 = CycloField(3)
    assert f3.coerce(CycloNum.zeta(6, 2)) == CycloNum.zeta(3, 1)
    assert CycloField(6).coerce([0, 1]) == CycloNum.zeta(6)
    assert CycloField(2).coerce(CycloNum.zeta(6, 3)) == Fraction(-1)
    assert isinstance(CycloField(1).coerce(3), Fraction)

    with pytest.raises(FieldTooSmall):
        CycloField(1).coerce(CycloNum.zeta(6))
    with pytest.raises(FieldTooSmall):
        f3.descend(CycloNum.zeta(6))


def test_field_zeta_small_orders():
    """Test that orders 1 and 2 use rational roots of unity."""
    assert CycloField(1).zeta(5) == 1
    assert CycloField(2).zeta(3) == -1
    assert CycloField(2).rational
    assert not CycloField(3).rational
    with pytest.raises(ValueError):
        CycloField(0)


def test_series_order():
    """Test ord for exact, zero and truncated series."""
    assert USeries.from_terms([(3, 1), (5, 1)]).order() == 3
    assert USeries.zero().order() == INFINITY

    truncated = USeries({}, known_order=10)
    with pytest.raises(OrderBeyondTruncation):
        truncated.order()
    assert USeries.from_terms([(4, 2)], known_order=10).order() == 4


def test_series_coefficient_beyond_known_order():
    """Test that unknown coefficients are refused."""
    s = USeries.from_terms([(1, 1)], known_order=3)
    assert s.coefficient(2) == 0
    with pytest.raises(OrderBeyondTruncation):
        s.coefficient(4)


def test_series_product_tracks_known_order():
    """Test precision bookkeeping in products."""
    truncated = USeries.from_terms([(1, 1)], known_order=4)
    exact = USeries.monomial(1, 2)
    product = truncated * exact
    assert product.known_order == 6
    assert product.coefficient(3) == 1


def test_series_unit_inverse_and_divide():
    """Test inversion of 1 - t and exact division."""
    inv = USeries.from_terms([(0, 1), (1, -1)]).unit_inverse(5)
    assert inv == USeries.from_terms([(k, 1) for k in range(6)], known_order=5)

    num = USeries.from_terms([(3, 1), (4, 1)])
    den = USeries.from_terms([(1, 1)])
    assert num.divide(den, 10) == USeries.from_terms([(2, 1), (3, 1)])


def test_series_compose():
    """Test composition with a series without constant term."""
    f = USeries.from_terms([(1, 1), (2, 1)])
    assert f.compose(USeries.monomial(2, 1)) == USeries.from_terms([(1, 2), (2, 4)])
    assert series_compose(USeries.monomial(1, 2), USeries.monomial(1, 3)) == USeries.monomial(1, 6)

    with pytest.raises(CompositionDivergent):
        f.compose(USeries.from_terms([(0, 1), (1, 1)]))


def test_substitute_scaled_with_sixth_root():
    """Test c2(ζ t) for the genus two series t⁸ + t¹⁰ + t¹¹."""
    f6 = CycloField(6)
    c2 = USeries.from_terms([(8, f6.one()), (10, f6.one()), (11, f6.one())])
    image = c2.substitute_scaled(f6.zeta(), 1)
    assert image.coefficient(8) == CycloNum.zeta(6, 2)
    assert image.coefficient(10) == CycloNum.zeta(6, 4)
    assert image.coefficient(11) == CycloNum.zeta(6, 5)


def test_univariate_gcd_and_divmod():
    """Test exact polynomial gcd and division."""
    p = USeries.from_terms([(0, -1), (2, 1)])
    q = USeries.from_terms([(0, -1), (1, 1)])
    quotient, remainder = poly_divmod(p, q)
    assert quotient == USeries.from_terms([(0, 1), (1, 1)])
    assert remainder.is_zero()
    assert poly_gcd(p, USeries.from_terms([(0, 1), (1, 1)])) == USeries.from_terms([(0, 1), (1, 1)])


def test_bipoly_basic_operations():
    """Test degree, order, homogeneous parts and derivatives."""
    f = BiPoly.from_list([(0, 2, 1), (3, 0, -1)])
    assert f.order() == 2
    assert f.degree() == 3
    assert f.homogeneous_part(3) == BiPoly.from_list([(3, 0, -1)])
    assert f.diff_x() == BiPoly.from_list([(2, 0, -3)])
    assert f.diff_y() == BiPoly.from_list([(0, 1, 2)])
    assert f.swap() == BiPoly.from_list([(2, 0, 1), (0, 3, -1)])
    assert BiPoly().order() == INFINITY


def test_bipoly_translate_and_chart():
    """Test translation and the chart (u, uv)."""
    square = BiPoly.x() ** 2
    assert square.translate(1, 0) == BiPoly.from_list([(2, 0, 1), (1, 0, 2), (0, 0, 1)])
    cusp = BiPoly.from_list([(0, 2, 1), (3, 0, -1)])
    assert cusp.chart_x_map() == BiPoly.from_list([(2, 2, 1), (3, 0, -1)])
    assert cusp.evaluate_point(Fraction(1), Fraction(1)) == 0


def test_poly_eval_series_on_cusp():
    """Test y² - 2x³ along (t², t³)."""
    f = BiPoly.from_list([(0, 2, 1), (3, 0, -2)])
    value = poly_eval_series(f, USeries.monomial(1, 2), USeries.monomial(1, 3))
    assert value == USeries.monomial(-1, 6)
    assert value.is_exact


def test_series_product_matches_sympy():
    """Test random exact products against sympy expansion."""
    rng = random.Random(7)
    t = sp.Symbol("t")
    for _ in range(20):
        a = {k: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for k in range(rng.randint(1, 6))}
        b = {k: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for k in range(rng.randint(1, 6))}
        product = USeries(a) * USeries(b)
        expected = sp.Poly(
            sp.expand(
                sum(sp.Rational(v.numerator, v.denominator) * t ** k for k, v in a.items())
                * sum(sp.Rational(v.numerator, v.denominator) * t ** k for k, v in b.items())
            ),
            t,
        )
        for (k,), coeff in expected.terms():
            assert product.coefficient(k) == Fraction(int(coeff.p), int(coeff.q))


def test_scalar_formatting():
    """Test report and literal formatting of scalars."""
    assert format_scalar(Fraction(1, 2)) == "1/2"
    assert format_scalar(CycloNum.zeta(6)) == "[0, 1]"
    assert exact_number(Fraction(4, 2)) == 2
    assert exact_number(Fraction(3, 2)) == "3/2"
    assert exact_number(INFINITY) == "inf"


def _random_cyclonum(rng, order):
    coeffs = [Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for _ in range(totient(order))]
    return CycloNum(order, coeffs)


def test_cyclonum_field_axioms():
    """Test associativity, distributivity and inverses on random triples."""
    rng = random.Random(2024)
    for _ in range(200):
        order = rng.choice([3, 4, 5, 6, 7, 8, 9, 12])
        a, b, c = (_random_cyclonum(rng, order) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        if a:
            assert a * a.inverse() == 1
            assert (b / a) * a == b


def _poly_product(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, u in enumerate(p):
        for j, v in enumerate(q):
            out[i + j] += u * v
    return out


def test_cyclotomic_polynomials_multiply_to_x_n_minus_one():
    """Test that the product of Φ_d over the divisors d of N is x^N - 1."""
    for order in range(1, 61):
        product = [1]
        for d in range(1, order + 1):
            if order % d == 0:
                product = _poly_product(product, list(cyclotomic_polynomial(d)))
        assert product == [-1] + [0] * (order - 1) + [1]


def _random_series(rng, lowest, known_order=INFINITY):
    top = lowest + rng.randint(0, 4)
    terms = {k: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for k in range(lowest + 1, top + 1)}
    terms[lowest] = Fraction(rng.choice([-3, -1, 1, 2]), rng.randint(1, 3))
    return USeries({k: v for k, v in terms.items() if k <= known_order}, known_order)


def test_orders_add_under_product_and_multiply_under_composition():
    """Test ord(f g) = ord f + ord g and ord(f ∘ g) = ord f · ord g, exact and truncated."""
    rng = random.Random(11)
    for _ in range(50):
        p, r = rng.randint(0, 4), rng.randint(1, 3)
        f_known = rng.choice([INFINITY, p + rng.randint(0, 3)])
        g_known = rng.choice([INFINITY, r + rng.randint(0, 3)])
        f = _random_series(rng, p, f_known)
        g = _random_series(rng, r, g_known)
        assert (f * g).order() == p + r
        assert series_compose(f, g).order() == p * r
