"""Exit criteria for the growth-series toolchain, one test per criterion.

Each test prints ``ACCEPTANCE <n> PASS|FAIL <summary>`` (visible with ``-s``
or in the terminal summary) before asserting.
"""

import io
import itertools
import json
import random
import time
from fractions import Fraction

import pytest

from growthfn.algebra import Polynomial, TermOrder, VarTable, parse_polynomial, s_polynomial
from growthfn.cli import run
from growthfn.grammar import to_poly_system
from growthfn.groebner import buchberger, elimination_ideal, ideal_membership, normal_form
from growthfn.oracle import enumerate_language
from growthfn.solve import (
    extract_rational,
    series_algebraic,
    series_rational,
    solve_groebner,
    solve_linear,
)
from conftest import CORPUS, load

B3_SERIES = [1, 10, 34, 90, 218, 506, 1146, 2554, 5626, 12282, 26618, 57338, 122874,
             262138, 557050, 1179642, 2490362, 5242874, 11010042]

RESULTS = []


@pytest.fixture
def record(request):
    def _record(number, passed, summary, status=None):
        status = status or ("PASS" if passed else "FAIL")
        line = f"ACCEPTANCE {number} {status} {summary}"
        RESULTS.append(line)
        capman = request.config.pluginmanager.getplugin("capturemanager")
        with capman.global_and_fixture_disabled():
            print("\n" + line)
        return passed
    return _record


def cli_json(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv) + ["--json"], stdout=out, stderr=err)
    return code, json.loads(out.getvalue()) if out.getvalue() else None


def wpoly(text, weights=("t",)):
    return parse_polynomial(text, VarTable(weights=weights))


def proportional(f, g):
    return set(f.terms) == set(g.terms) and len({f.terms[m] / g.terms[m] for m in f.terms}) == 1


def test_1_b3_unweighted_series(record):
    t0 = time.perf_counter()
    code, doc = cli_json("series", "charney_b3.grm", "-n", "18")
    code_g, doc_g = cli_json("series", "charney_b3.grm", "-n", "18", "--method", "groebner")
    elapsed = time.perf_counter() - t0
    ok = (code == code_g == 0
          and doc["series"]["coefficients"] == B3_SERIES
          and doc_g["series"]["coefficients"] == B3_SERIES
          and elapsed < 10)
    record(1, ok, f"B3 series, 19 exact coefficients (auto and groebner), {elapsed:.2f}s < 10s")
    assert ok


def test_2_b3_closed_form(b3, record):
    rf = extract_rational(solve_groebner(to_poly_system(b3)))
    num, den = wpoly("4*t^3 + 8*t^2 - 5*t - 1"), wpoly("4*t^3 - 8*t^2 + 5*t - 1")
    factored = wpoly("(t - 1)*(2*t - 1)^2")
    ok = (rf.cross_equal(num, den)
          and factored == den
          and num == den + wpoly("2*t*(8*t - 5)")
          and rf.cross_equal(den + wpoly("2*t*(8*t - 5)"), factored))
    record(2, ok, "B3 closed form cross-equal to printed form and to 1 + 2t(8t-5)/((t-1)(2t-1)^2)")
    assert ok


def test_3_b3_elimination_generator(b3, record):
    system = to_poly_system(b3)
    basis = buchberger(system.equations, TermOrder(system.var_table))
    free = [g for g in basis if not (g.variables() & set(system.var_table.eliminate))]
    target = parse_polynomial("4*B3*t^3 - 8*B3*t^2 - 4*t^3 + 5*B3*t - 8*t^2 - B3 + 5*t + 1",
                              system.var_table)
    ok = (len(basis) == 7 and len(free) == 1 and proportional(free[0], target)
          and elimination_ideal(basis, ("B3", "t")) == free)
    record(3, ok, f"unique v-free basis element (of {len(basis)}) is a scalar multiple of the printed one")
    assert ok


def test_4_b3_braid_weighted(b3w, record):
    system = to_poly_system(b3w)
    t0 = time.perf_counter()
    basis = buchberger(system.equations, TermOrder(system.var_table))
    elapsed = time.perf_counter() - t0
    free = elimination_ideal(basis, ("B3", "t"))
    target = parse_polynomial(
        "B3*t^5 + B3*t^4 - t^5 - 3*B3*t^3 - t^4 - B3*t^2 - t^3 + 3*B3*t - t^2 - B3 + t + 1",
        system.var_table)
    rf = extract_rational(solve_groebner(system))
    series = list(series_rational(rf, None, 5).coefficients)
    ok = (len(free) == 1 and proportional(free[0], target)
          and rf.cross_equal(wpoly("t^5 + t^4 + t^3 + t^2 - t - 1"),
                             wpoly("t^5 + t^4 - 3*t^3 - t^2 + 3*t - 1"))
          and series == [1, 4, 10, 22, 44, 84]
          and elapsed < 60)
    record(4, ok, f"weighted generator, closed form, series 1,4,10,22,44,84; groebner {elapsed:.2f}s < 60s")
    assert ok


def test_5_balanced_pairs(dyck, record):
    system = to_poly_system(dyck)
    rf = extract_rational(solve_groebner(system))
    xy = ("x", "y")
    series = list(series_rational(rf, {"x": 1, "y": 1}, 11).coefficients)
    ok = (rf.numerator == wpoly("1", xy) and rf.denominator == wpoly("1 - x*y", xy)
          and series == [1, 0] * 6)
    record(5, ok, "balanced pairs: 1/(1-xy), series 1,0,1,0,...")
    assert ok


def test_6_oracle_equivalence(record):
    t0 = time.perf_counter()
    outcomes = {}
    for name in CORPUS:
        code, doc = cli_json("check", name, "-n", "10")
        outcomes[f"{name}@10"] = code == 0 and doc["check"]["agree"]
    code, doc = cli_json("check", "charney_b3.grm", "-n", "12")
    outcomes["charney_b3.grm@12"] = code == 0 and doc["check"]["agree"]
    elapsed = time.perf_counter() - t0
    ok = all(outcomes.values()) and elapsed < 300
    record(6, ok, f"check exit 0 for {sorted(k for k, v in outcomes.items() if v)}; {elapsed:.1f}s < 300s")
    assert ok


def test_7_cross_path_equality(record):
    equal = []
    for name in CORPUS:
        system = to_poly_system(load(name))
        equal.append(solve_linear(system) == extract_rational(solve_groebner(system)))
    ok = all(equal)
    record(7, ok, f"linear == groebner rational function for {sum(equal)}/{len(CORPUS)} bundled grammars")
    assert ok


def _random_ideal(rng):
    n = rng.randint(1, 4)
    names = [f"x{i}" for i in range(n)]
    cut = sorted(rng.sample(range(n + 1), 2))
    vt = VarTable(eliminate=names[:cut[0]], retain=names[cut[0]:cut[1]], weights=names[cut[1]:])
    gens = []
    for _ in range(rng.randint(1, 4)):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            while True:
                m = tuple(rng.randint(0, 3) for _ in range(n))
                if sum(m) <= 3:
                    break
            terms[m] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        gens.append(Polynomial(terms, vt))
    return vt, gens


def test_8_groebner_property_suite(record):
    rng = random.Random(0)
    checked = 0
    failures = []
    while checked < 200:
        vt, gens = _random_ideal(rng)
        if not any(gens):
            continue
        checked += 1
        order = TermOrder(vt)
        basis = buchberger(gens, order)
        g = list(basis)
        good = all(not normal_form(s_polynomial(a, b, order), g, order)
                   for a, b in itertools.combinations(g, 2))
        good &= all(ideal_membership(f, basis) for f in gens)
        shuffled = [f for f in gens if f]
        rng.shuffle(shuffled)
        scaled = [f.scale(Fraction(rng.choice([-7, -2, 3, 5]), rng.choice([1, 2, 9]))) for f in shuffled]
        good &= buchberger(shuffled, order).to_text() == basis.to_text()
        good &= buchberger(scaled, order).to_text() == basis.to_text()
        if not good:
            failures.append(checked)
    ok = not failures
    record(8, ok, f"200 random ideals: S-pairs reduce to 0, inputs in ideal, permutation/scaling "
                  f"invariant ({len(failures)} failures)")
    assert ok


def test_9_algebraic_path(catalan, record):
    eq = solve_groebner(to_poly_system(catalan))
    series = list(series_algebraic(eq, 1, None, 10).coefficients)
    oracle = enumerate_language(catalan, None, 10)
    ok = (eq.degF == 2
          and series == oracle.derivation_list() == oracle.word_list()
          and series[0::2] == [1, 1, 2, 5, 14, 42]
          and all(c == 0 for c in series[1::2]))
    record(9, ok, "S -> eps | a S b S: Newton series equals brute-force counts (Catalan at even degrees)")
    assert ok


def test_10_hand_enumeration_excluded(record):
    record(10, True, "12 length-2 braids needs braid arithmetic (out of scope); nothing depends on it",
           status="EXCLUDED")
    pytest.skip("criterion 10 is an explicit exclusion, not a check")
