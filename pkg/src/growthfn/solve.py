"""From a polynomial system to the start symbol's generating function and its series."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import Polynomial, TermOrder, VarTable, univariate_divmod, univariate_gcd
from .grammar import PolySystem
from .groebner import CancelToken, GroebnerBasis, buchberger, elimination_ideal

__all__ = [
    "FunctionalEquation",
    "GrowthResult",
    "NotLinearError",
    "RationalFunction",
    "SeriesExpansion",
    "SolveError",
    "extract_rational",
    "normalize_rational",
    "series_algebraic",
    "series_rational",
    "solve",
    "solve_groebner",
    "solve_linear",
]


class SolveError(ValueError):
    pass


class NotLinearError(SolveError):
    pass


@dataclass(frozen=True)
class FunctionalEquation:
    """``poly(F, w) = 0`` for the start unknown ``F``; integral, primitive, positive lead."""

    poly: Polynomial
    unknown: str

    @property
    def degF(self) -> int:
        return self.poly.degree_in(self.unknown)

    @property
    def weight_vars(self) -> tuple[str, ...]:
        return self.poly.var_table.weights

    @property
    def order(self) -> TermOrder:
        return TermOrder(self.poly.var_table)

    def to_text(self) -> str:
        return self.poly.to_text(self.order)

    @classmethod
    def from_polynomial(cls, poly: Polynomial, unknown: str, weight_vars: Sequence[str]):
        vt = VarTable(retain=(unknown,), weights=tuple(weight_vars))
        p = poly.restrict(vt)
        return cls(p.primitive(TermOrder(vt)), unknown)


@dataclass(frozen=True)
class RationalFunction:
    """``numerator / denominator`` in the weight variables, denominator constant term 1."""

    numerator: Polynomial
    denominator: Polynomial
    notes: tuple[str, ...] = field(default=(), compare=False)

    @property
    def weight_vars(self) -> tuple[str, ...]:
        return self.numerator.var_table.weights

    def cross_equal(self, num: Polynomial, den: Polynomial) -> bool:
        """Whether ``num/den`` is the same function (``num*D == N*den``)."""
        vt = self.numerator.var_table
        num, den = num.restrict(vt), den.restrict(vt)
        return num * self.denominator == self.numerator * den

    def to_text(self) -> str:
        order = TermOrder(self.numerator.var_table)
        return f"({self.numerator.to_text(order)}) / ({self.denominator.to_text(order)})"


@dataclass(frozen=True)
class SeriesExpansion:
    variable: str
    coefficients: tuple
    order: int

    def __post_init__(self):
        if len(self.coefficients) != self.order + 1:
            raise SolveError("coefficient list length must be order + 1")

    def to_text(self) -> str:
        return ", ".join(str(c) for c in self.coefficients)


@dataclass(frozen=True)
class GrowthResult:
    method: str
    equation: FunctionalEquation
    rational: RationalFunction | None = None
    basis: GroebnerBasis | None = None
    notes: tuple[str, ...] = ()


def _weight_table(weight_vars) -> VarTable:
    return VarTable(weights=tuple(weight_vars))


def _to_list(p: Polynomial) -> list[Fraction]:
    name = p.var_table.names[0]
    return p.to_univariate({name: 1})


def _from_list(coeffs, vt: VarTable) -> Polynomial:
    return Polynomial({(k,): c for k, c in enumerate(coeffs) if c}, vt)


def normalize_rational(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Canonical form: common factors removed, denominator constant term +1.

    With one weight variable the univariate gcd is divided out.  With several,
    only common monomial factors are removed and a note says so.
    """
    if not den:
        raise SolveError("zero denominator")
    vt = den.var_table
    num = num.restrict(vt)
    notes = []
    if not num:
        den = Polynomial.constant(1, vt)
    else:
        mono = tuple(min(a, b) for a, b in zip(num.monomial_content(), den.monomial_content()))
        num, den = num.div_monomial(mono), den.div_monomial(mono)
        if len(vt) == 1:
            g = univariate_gcd(_to_list(num), _to_list(den))
            if len(g) > 1:
                num = _from_list(univariate_divmod(_to_list(num), g)[0], vt)
                den = _from_list(univariate_divmod(_to_list(den), g)[0], vt)
        elif num.total_degree() and den.total_degree():
            notes.append("coprimality not fully reduced")
    c = den.constant_term()
    if not c:
        raise SolveError("not a power series at 0: denominator has no constant term")
    return RationalFunction(num.scale(1 / c), den.scale(1 / c), tuple(notes))


def groebner_elimination(
    system: PolySystem, cancel: CancelToken | None = None
) -> tuple[GroebnerBasis, FunctionalEquation]:
    order = TermOrder(system.var_table)
    basis = buchberger(system.equations, order, cancel=cancel)
    keep = (system.start,) + tuple(system.weight_vars)
    found = [g for g in elimination_ideal(basis, keep) if g.degree_in(system.start) >= 1]
    if not found:
        raise SolveError("elimination failed: no basis element in the start unknown and weights")
    eqs = [FunctionalEquation.from_polynomial(g, system.start, system.weight_vars) for g in found]
    eqs.sort(key=lambda e: (e.degF, len(e.poly), e.to_text()))
    return basis, eqs[0]


def solve_groebner(system: PolySystem, cancel: CancelToken | None = None) -> FunctionalEquation:
    """Eliminate every auxiliary unknown and return the functional equation of the start symbol."""
    return groebner_elimination(system, cancel)[1]


def _bareiss_det(matrix: list[list[Polynomial]], one: Polynomial) -> Polynomial:
    m = [row[:] for row in matrix]
    n = len(m)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return one - one
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev)
        prev = m[k][k]
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]


def solve_linear(system: PolySystem) -> RationalFunction:
    """Solve a system linear in the unknowns by Cramer's rule with fraction-free determinants."""
    vt = system.var_table
    wt = _weight_table(system.weight_vars)
    unknown_pos = [vt.index(u) for u in system.unknowns]
    n = len(unknown_pos)
    matrix = [[Polynomial.zero(wt) for _ in range(n)] for _ in range(n)]
    rhs = [Polynomial.zero(wt) for _ in range(n)]
    w_pos = [vt.index(w) for w in system.weight_vars]

    for i, eq in enumerate(system.equations):
        rows: list[dict] = [{} for _ in range(n + 1)]
        for m, c in eq.terms.items():
            hits = [j for j, p in enumerate(unknown_pos) if m[p]]
            if len(hits) > 1 or (hits and m[unknown_pos[hits[0]]] > 1):
                raise NotLinearError("not linear: use groebner path")
            slot = hits[0] if hits else n
            wm = tuple(m[p] for p in w_pos)
            rows[slot][wm] = rows[slot].get(wm, 0) + c
        for j in range(n):
            matrix[i][j] = Polynomial(rows[j], wt)
        rhs[i] = -Polynomial(rows[n], wt)

    one = Polynomial.constant(1, wt)
    det = _bareiss_det(matrix, one)
    if not det:
        raise SolveError("singular system")
    s = system.unknowns.index(system.start)
    replaced = [row[:s] + [rhs[i]] + row[s + 1:] for i, row in enumerate(matrix)]
    return normalize_rational(_bareiss_det(replaced, one), det)


def extract_rational(eq: FunctionalEquation) -> RationalFunction:
    """Write ``eq`` as ``F*q - p`` and return ``p/q`` in canonical form."""
    if eq.degF != 1:
        raise SolveError("algebraic, not rational: use series_algebraic")
    parts = eq.poly.coefficients_in(eq.unknown)
    wt = _weight_table(eq.weight_vars)
    q = parts[1].restrict(wt)
    p = -parts.get(0, Polynomial.zero(eq.poly.var_table)).restrict(wt)
    return normalize_rational(p, q)


def solve(system: PolySystem, method: str = "auto", cancel: CancelToken | None = None) -> GrowthResult:
    """Run one of the ``linear``, ``groebner`` or ``auto`` solving paths."""
    if method not in ("auto", "linear", "groebner"):
        raise SolveError(f"unknown method {method!r}")
    if method in ("auto", "linear"):
        try:
            rf = solve_linear(system)
        except NotLinearError:
            if method == "linear":
                raise
        else:
            vt = VarTable(retain=(system.start,), weights=tuple(system.weight_vars))
            F = Polynomial.variable(system.start, vt)
            poly = F * rf.denominator.restrict(vt) - rf.numerator.restrict(vt)
            eq = FunctionalEquation.from_polynomial(poly, system.start, system.weight_vars)
            return GrowthResult("linear", eq, rf, None, rf.notes)
    basis, eq = groebner_elimination(system, cancel)
    rf = extract_rational(eq) if eq.degF == 1 else None
    return GrowthResult("groebner", eq, rf, basis, rf.notes if rf else ())


# -- power series --------------------------------------------------------------

def _check_subst(weight_vars, subst: Mapping[str, int] | None, minimum: int = 0) -> dict:
    if subst is None:
        return {v: 1 for v in weight_vars}
    out = {}
    for k, e in subst.items():
        if k not in weight_vars:
            raise SolveError(f"substitution for unknown weight variable {k!r}")
        if not isinstance(e, int) or e < minimum:
            raise SolveError(f"substitution exponent for {k!r} must be an integer >= {minimum}")
        out[k] = e
    missing = [v for v in weight_vars if v not in out]
    if missing:
        raise SolveError(f"no substitution given for {', '.join(missing)}")
    return out


def _series_variable(weight_vars) -> str:
    return weight_vars[0] if len(weight_vars) == 1 else "s"


def _tidy(c: Fraction):
    return c.numerator if c.denominator == 1 else c


def series_rational(rf: RationalFunction, subst: Mapping[str, int] | None, N: int) -> SeriesExpansion:
    """Expand ``rf`` at ``w -> s**subst[w]`` up to ``s**N`` via the denominator's recurrence."""
    if N < 0:
        raise SolveError("series order must be >= 0")
    subst = _check_subst(rf.weight_vars, subst)
    num = rf.numerator.to_univariate(subst)
    den = rf.denominator.to_univariate(subst)
    if not den or not den[0]:
        raise SolveError("not a power series at 0: substituted denominator vanishes at 0")
    d0 = den[0]
    out: list[Fraction] = []
    for n in range(N + 1):
        acc = num[n] if n < len(num) else Fraction(0)
        for k in range(1, min(n, len(den) - 1) + 1):
            acc -= den[k] * out[n - k]
        out.append(acc / d0)
    return SeriesExpansion(_series_variable(rf.weight_vars), tuple(_tidy(c) for c in out), N)


def _mul(a, b, n):
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def _inverse(a, n):
    inv = [Fraction(0)] * n
    inv[0] = 1 / a[0]
    for k in range(1, n):
        acc = Fraction(0)
        for j in range(1, min(k, len(a) - 1) + 1):
            acc += a[j] * inv[k - j]
        inv[k] = -acc * inv[0]
    return inv


def series_algebraic(
    eq: FunctionalEquation, c0, subst: Mapping[str, int] | None, N: int
) -> SeriesExpansion:
    """Power-series root of ``eq`` with constant term ``c0``, by Newton iteration."""
    if N < 0:
        raise SolveError("series order must be >= 0")
    subst = _check_subst(eq.weight_vars, subst)
    c0 = Fraction(c0)
    full = dict(subst)
    full[eq.unknown] = 0
    # coefficient series of F**k after substitution
    by_power: dict[int, list[Fraction]] = {}
    for k, part in eq.poly.coefficients_in(eq.unknown).items():
        by_power[k] = part.to_univariate(full)
    deg = max(by_power)
    coeffs = [by_power.get(k, []) for k in range(deg + 1)]

    def at0(series):
        return series[0] if series else Fraction(0)

    value0 = sum(at0(c) * c0 ** k for k, c in enumerate(coeffs))
    slope0 = sum(k * at0(c) * c0 ** (k - 1) for k, c in enumerate(coeffs) if k)
    if value0:
        raise SolveError("wrong initial value: P(c0, 0) != 0")
    if not slope0:
        raise SolveError("degenerate branch: dP/dF(c0, 0) == 0")

    def horner(F, n, derivative=False):
        poly = coeffs
        if derivative:
            poly = [[k * x for x in coeffs[k]] for k in range(1, deg + 1)]
        acc = [Fraction(0)] * n
        for c in reversed(poly):
            acc = _mul(acc, F, n)
            for i, x in enumerate(c[:n]):
                acc[i] += x
        return acc

    F = [c0]
    prec = 1
    target = N + 1
    while prec < target:
        prec = min(2 * prec, target)
        F = F + [Fraction(0)] * (prec - len(F))
        value = horner(F, prec)
        slope = horner(F, prec, derivative=True)
        step = _mul(value, _inverse(slope, prec), prec)
        F = [a - b for a, b in zip(F, step)]
    return SeriesExpansion(_series_variable(eq.weight_vars), tuple(_tidy(c) for c in F[:target]), N)
