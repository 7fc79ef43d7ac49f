from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from growthfn.algebra import (
    AlgebraError,
    Polynomial,
    TermOrder,
    VarTable,
    compare_monomials,
    divide_reduce,
    parse_polynomial,
    s_polynomial,
    univariate_gcd,
)

XY = VarTable.lex("x", "y")
LEX = TermOrder(XY)
XYZ = VarTable.lex("x", "y", "z")


def P(text, vt=XY):
    return parse_polynomial(text, vt)


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monos = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(monos, coeffs, max_size=5).map(lambda d: Polynomial(d, XYZ))
nonzero_polys = polys.filter(bool)


def test_additive_inverse():
    x = P("x")
    assert (x + (-x)).is_zero()
    assert x - x == 0


def test_difference_of_squares():
    assert P("x + 1") * P("x - 1") == P("x^2 - 1")


@given(polys)
def test_annihilator(f):
    assert (f * Polynomial.zero(XYZ)).is_zero()
    assert f.scale(0).is_zero()


def test_mismatched_tables_rejected():
    with pytest.raises(AlgebraError):
        P("x") + parse_polynomial("x", VarTable.lex("x"))


def test_compare_monomials():
    assert compare_monomials(LEX, (2, 0), (1, 1)) == "greater"
    assert compare_monomials(LEX, (1, 1), (1, 1)) == "equal"
    blocks = VarTable(eliminate=("v",), weights=("t",))
    assert compare_monomials(TermOrder(blocks), (1, 0), (0, 5)) == "greater"
    assert compare_monomials(TermOrder(blocks), (0, 5), (1, 0)) == "less"


def test_compare_rejects_wrong_length():
    with pytest.raises(AlgebraError):
        compare_monomials(LEX, (1,), (1, 0))


@settings(max_examples=300, deadline=None)
@given(monos, monos, monos)
def test_term_order_laws(a, b, c):
    order = TermOrder(VarTable(eliminate=("v",), retain=("F",), weights=("t",)))
    r = order.compare(a, b)
    assert r == -order.compare(b, a)
    assert (r == 0) == (a == b)
    mul = lambda m, n: tuple(i + j for i, j in zip(m, n))
    if r < 0:
        assert order.compare(mul(c, a), mul(c, b)) < 0
    assert order.compare((0, 0, 0), a) <= 0
    # elimination block dominates
    if a[0] and not b[0]:
        assert r > 0


def test_division_hand_trace():
    (q,), r = divide_reduce(P("x^2*y"), [P("x*y - 1")], LEX)
    assert q == P("x")
    assert r == P("x")


def test_division_self():
    f = P("3*x^2*y - y + 7")
    _, r = divide_reduce(f, [f], LEX)
    assert r.is_zero()


def test_division_irreducible():
    _, r = divide_reduce(P("x - y"), [P("x^2 - 1"), P("x*y - 1")], LEX)
    assert r == P("x - y")


def test_division_by_zero_rejected():
    with pytest.raises(AlgebraError):
        divide_reduce(P("x"), [Polynomial.zero(XY)], LEX)


@settings(max_examples=300, deadline=None)
@given(polys, st.lists(nonzero_polys, min_size=1, max_size=3))
def test_division_reassembles(f, divisors):
    order = TermOrder(XYZ)
    qs, r = divide_reduce(f, divisors, order)
    total = r
    for q, g in zip(qs, divisors):
        total = total + q * g
        if q and f:
            assert order.compare((q * g).leading_monomial(), f.leading_monomial()) <= 0
    assert total == f
    leads = [g.leading_monomial() for g in divisors]
    for m in r.terms:
        assert not any(all(a <= b for a, b in zip(lm, m)) for lm in leads)


def test_s_polynomial_examples():
    assert s_polynomial(P("x^2 - 1"), P("x*y - 1"), LEX) == P("x - y")
    f = P("x^3 - 2*y")
    assert s_polynomial(f, f, LEX).is_zero()
    assert s_polynomial(P("x"), P("y"), LEX).is_zero()
    with pytest.raises(AlgebraError):
        s_polynomial(P("x"), Polynomial.zero(XY), LEX)


@settings(max_examples=1000, deadline=None)
@given(polys, polys, polys)
def test_ring_laws(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f


@given(polys, polys)
def test_coefficients_stay_canonical(f, g):
    for p in (f + g, f - g, f * g, -f, f.scale(Fraction(3, 7))):
        for c in p.terms.values():
            assert c != 0
            assert c.denominator > 0
            assert Fraction(c.numerator, c.denominator) == c


@given(polys)
def test_render_parse_roundtrip(f):
    assert parse_polynomial(f.to_text(), XYZ) == f


def test_render_format():
    assert P("-x + 3/4*x^2*y - 1").to_text() == "3/4*x^2*y - x - 1"
    assert Polynomial.zero(XY).to_text() == "0"
    assert P("(x + y)^2").to_text() == "x^2 + 2*x*y + y^2"


def test_parse_rejects_unknown_variable():
    with pytest.raises(AlgebraError):
        P("x + w")


def test_primitive_part():
    p = P("-2/3*x + 4/9")
    assert p.primitive() == P("3*x - 2")
    assert p.content() == Fraction(2, 9)


def test_univariate_gcd():
    # (s-1)(s-2) and (s-1)(s+3)
    assert univariate_gcd([2, -3, 1], [-3, 2, 1]) == [-1, 1]
    assert univariate_gcd([1, 1], [0, 1]) == [1]


def test_poly_arith_dispatch():
    from growthfn.algebra import poly_arith
    x, y = P("x"), P("y")
    assert poly_arith("add", x, -x).is_zero()
    assert poly_arith("mul", P("x + 1"), P("x - 1")) == P("x^2 - 1")
    assert poly_arith("sub", x, y) == P("x - y")
    assert poly_arith("neg", x) == P("-x")
    assert poly_arith("scale", x, Fraction(1, 2)) == P("1/2*x")
    with pytest.raises(AlgebraError):
        poly_arith("add", x, parse_polynomial("x", VarTable.lex("x")))
