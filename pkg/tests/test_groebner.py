import itertools
import random
from fractions import Fraction

import pytest

from growthfn.algebra import AlgebraError, Polynomial, TermOrder, VarTable, parse_polynomial
from growthfn.grammar import to_poly_system
from growthfn.groebner import (
    Cancelled,
    CancelToken,
    buchberger,
    elimination_ideal,
    ideal_membership,
    normal_form,
)
from growthfn.algebra import s_polynomial

XY = VarTable.lex("x", "y")
LEX = TermOrder(XY)

# first element of the unweighted B3 basis, as printed in the source
B3_ELIM = "4*B3*t^3 - 8*B3*t^2 - 4*t^3 + 5*B3*t - 8*t^2 - B3 + 5*t + 1"


def P(text, vt=XY):
    return parse_polynomial(text, vt)


def proportional(f, g):
    if set(f.terms) != set(g.terms):
        return False
    ratios = {f.terms[m] / g.terms[m] for m in f.terms}
    return len(ratios) == 1


def test_hand_trace_basis():
    basis = buchberger([P("x^2 - 1"), P("x*y - 1")], LEX)
    assert list(basis) == [P("y^2 - 1"), P("x - y")]


def test_single_generator():
    assert list(buchberger([P("x")], LEX)) == [P("x")]
    assert list(buchberger([P("3*x")], LEX)) == [P("x")]


def test_zero_ideal_rejected():
    with pytest.raises(AlgebraError, match="zero ideal"):
        buchberger([Polynomial.zero(XY)], LEX)


def test_unit_ideal():
    assert list(buchberger([P("x"), P("x - 1")], LEX)) == [P("1")]


def test_b3_unweighted_elimination_generator(b3):
    system = to_poly_system(b3)
    basis = buchberger(system.equations, TermOrder(system.var_table))
    elim = elimination_ideal(basis, ("B3", "t"))
    assert len(elim) == 1
    assert proportional(elim[0], parse_polynomial(B3_ELIM, system.var_table))


def test_elimination_ideal_examples():
    basis = buchberger([P("x^2 - 1"), P("x*y - 1")], LEX)
    blocks = VarTable(eliminate=("x",), weights=("y",))
    basis_b = buchberger([P("x^2 - 1", blocks), P("x*y - 1", blocks)], TermOrder(blocks))
    assert elimination_ideal(basis_b, {"y"}) == [P("y^2 - 1", blocks)]
    assert elimination_ideal(basis, {"x", "y"}) == list(basis)


def test_elimination_requires_block_alignment():
    blocks = VarTable(eliminate=("x",), weights=("y",))
    basis = buchberger([P("x*y - 1", blocks)], TermOrder(blocks))
    with pytest.raises(AlgebraError):
        elimination_ideal(basis, {"x"})


def test_ideal_membership():
    assert ideal_membership(P("x^2 - y^2"), buchberger([P("x - y")], LEX))
    basis = buchberger([P("x - y"), P("y^2 - 1")], LEX)
    assert not ideal_membership(P("x + y"), basis)
    assert normal_form(P("x + y"), basis, LEX) == P("2*y")
    assert ideal_membership(Polynomial.zero(XY), basis)


def test_cancellation(b3w):
    system = to_poly_system(b3w)
    token = CancelToken()
    token.cancel()
    with pytest.raises(Cancelled):
        buchberger(system.equations, TermOrder(system.var_table), cancel=token)


def _random_ideal(rng, nvars=3):
    names = [f"x{i}" for i in range(nvars)]
    vt = VarTable(eliminate=names[:1], retain=names[1:2], weights=names[2:])
    gens = []
    for _ in range(rng.randint(1, 3)):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            m = tuple(rng.randint(0, 2) for _ in names)
            terms[m] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        gens.append(Polynomial(terms, vt))
    return vt, [g for g in gens if g]


@pytest.mark.parametrize("seed", range(25))
def test_basis_properties(seed):
    rng = random.Random(seed)
    vt, gens = _random_ideal(rng)
    if not gens:
        pytest.skip("all-zero draw")
    order = TermOrder(vt)
    basis = buchberger(gens, order)
    g = list(basis)
    for a, b in itertools.combinations(g, 2):
        assert not normal_form(s_polynomial(a, b, order), g, order)
    for f in gens:
        assert ideal_membership(f, basis)
    leads = [p.leading_monomial(order) for p in g]
    for i, p in enumerate(g):
        assert p.leading_coefficient(order) == 1
        for j, lm in enumerate(leads):
            if i != j:
                assert not any(all(x <= y for x, y in zip(lm, m)) for m in p.terms)
    assert leads == sorted(leads, key=order.key)
    # determinism, permutation and scaling invariance
    shuffled = gens[:]
    rng.shuffle(shuffled)
    scaled = [f.scale(Fraction(rng.choice([-3, 2, 5]), rng.choice([1, 7]))) for f in shuffled]
    for other in (gens, shuffled, scaled):
        assert buchberger(other, order).to_text() == basis.to_text()
