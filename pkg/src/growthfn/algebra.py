"""Exact sparse multivariate polynomials over the rationals.

Coefficients are :class:`fractions.Fraction` values (always stored reduced
with a positive denominator).  Monomials are exponent tuples indexed by the
position of each variable in a :class:`VarTable`.  The only term order is
block-lexicographic, which for lex-within-block coincides with plain lex over
the table's variable sequence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Mapping, Sequence

Monomial = tuple  # tuple[int, ...]

__all__ = [
    "AlgebraError",
    "VarTable",
    "TermOrder",
    "Polynomial",
    "Monomial",
    "compare_monomials",
    "divide_reduce",
    "s_polynomial",
    "monomial_divides",
    "poly_arith",
    "monomial_lcm",
    "parse_polynomial",
    "univariate_gcd",
]


class AlgebraError(ValueError):
    """Structural or domain error in polynomial arithmetic."""


@dataclass(frozen=True)
class VarTable:
    """Ordered variable names split into elimination, retained and weight blocks."""

    eliminate: tuple[str, ...] = ()
    retain: tuple[str, ...] = ()
    weights: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "eliminate", tuple(self.eliminate))
        object.__setattr__(self, "retain", tuple(self.retain))
        object.__setattr__(self, "weights", tuple(self.weights))
        names = self.names
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate variable names in {names}")

    @classmethod
    def lex(cls, *names: str) -> VarTable:
        """A table with every variable in one block: plain lex."""
        return cls(retain=names)

    @property
    def names(self) -> tuple[str, ...]:
        return self.eliminate + self.retain + self.weights

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise AlgebraError(f"unknown variable {name!r}") from None

    def block_of(self, name: str) -> str:
        if name in self.eliminate:
            return "eliminate"
        if name in self.retain:
            return "retain"
        if name in self.weights:
            return "weights"
        raise AlgebraError(f"unknown variable {name!r}")

    def trailing_sets(self) -> list[frozenset]:
        """Variable sets that are unions of trailing blocks (legal elimination targets)."""
        return [
            frozenset(self.names),
            frozenset(self.retain + self.weights),
            frozenset(self.weights),
            frozenset(),
        ]

    def one(self) -> Monomial:
        return (0,) * len(self.names)

    def var(self, name: str) -> Monomial:
        exps = [0] * len(self.names)
        exps[self.index(name)] = 1
        return tuple(exps)


@dataclass(frozen=True)
class TermOrder:
    """Block-lexicographic order over a VarTable.

    Blocks rank elimination > retained > weight and variables inside a block
    rank by declaration position, so the sort key is the exponent tuple.
    """

    var_table: VarTable
    kind: str = "block-lex"

    def key(self, m: Monomial):
        return m

    def compare(self, m1: Monomial, m2: Monomial) -> int:
        k1, k2 = self.key(m1), self.key(m2)
        return (k1 > k2) - (k1 < k2)


def compare_monomials(order: TermOrder, m1: Monomial, m2: Monomial) -> str:
    """Return ``"less"``, ``"equal"`` or ``"greater"``."""
    n = len(order.var_table)
    if len(m1) != n or len(m2) != n:
        raise AlgebraError("monomial length does not match the variable table")
    return ("equal", "greater", "less")[order.compare(m1, m2)]


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    """True if ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def monomial_quotient(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficient must be int or Fraction, not {type(c).__name__}")


class Polynomial:
    """Immutable sparse polynomial: a map from exponent tuples to nonzero Fractions."""

    __slots__ = ("terms", "var_table", "_hash")

    def __init__(self, terms: Mapping[Monomial, object], var_table: VarTable):
        n = len(var_table)
        clean = {}
        for m, c in terms.items():
            m = tuple(m)
            if len(m) != n:
                raise AlgebraError(f"monomial {m} does not fit a table of {n} variables")
            c = _as_fraction(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self.terms = clean
        self.var_table = var_table
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, var_table: VarTable) -> Polynomial:
        # trusted constructor: keys are tuples of the right length, values nonzero Fractions
        p = cls.__new__(cls)
        p.terms = terms
        p.var_table = var_table
        p._hash = None
        return p

    @classmethod
    def zero(cls, var_table: VarTable) -> Polynomial:
        return cls._raw({}, var_table)

    @classmethod
    def constant(cls, c, var_table: VarTable) -> Polynomial:
        c = _as_fraction(c)
        return cls._raw({var_table.one(): c} if c else {}, var_table)

    @classmethod
    def variable(cls, name: str, var_table: VarTable) -> Polynomial:
        return cls._raw({var_table.var(name): Fraction(1)}, var_table)

    @classmethod
    def monomial(cls, m: Monomial, var_table: VarTable, coeff=1) -> Polynomial:
        return cls({m: coeff}, var_table)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def order(self) -> TermOrder:
        return TermOrder(self.var_table)

    def leading_monomial(self, order: TermOrder | None = None) -> Monomial:
        if not self.terms:
            raise AlgebraError("zero polynomial has no leading monomial")
        if order is None:
            return max(self.terms)
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: TermOrder | None = None) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def sorted_terms(self, order: TermOrder | None = None):
        key = order.key if order is not None else None
        return sorted(self.terms.items(), key=(lambda kv: key(kv[0])) if key else None, reverse=True)

    def variables(self) -> set[str]:
        names = self.var_table.names
        return {names[i] for m in self.terms for i, e in enumerate(m) if e}

    def degree_in(self, name: str) -> int:
        i = self.var_table.index(name)
        return max((m[i] for m in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def constant_term(self) -> Fraction:
        return self.terms.get(self.var_table.one(), Fraction(0))

    def coefficients_in(self, name: str) -> dict[int, Polynomial]:
        """Split as ``sum_k coeff_k * name**k``; the coefficients no longer contain ``name``."""
        i = self.var_table.index(name)
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            k = m[i]
            out.setdefault(k, {})[m[:i] + (0,) + m[i + 1:]] = c
        return {k: Polynomial._raw(t, self.var_table) for k, t in out.items()}

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.var_table != self.var_table:
                raise AlgebraError("polynomials live over different variable tables")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.var_table)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m)
            if s is None:
                terms[m] = c
            else:
                s += c
                if s:
                    terms[m] = s
                else:
                    del terms[m]
        return Polynomial._raw(terms, self.var_table)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()}, self.var_table)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c) -> Polynomial:
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.var_table)
        return Polynomial._raw({m: v * c for m, v in self.terms.items()}, self.var_table)

    def mul_term(self, m: Monomial, c) -> Polynomial:
        """Multiply by the single term ``c * m``."""
        if not c:
            return Polynomial.zero(self.var_table)
        return Polynomial._raw(
            {monomial_mul(k, m): v * c for k, v in self.terms.items()}, self.var_table
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return Polynomial._raw({m: c for m, c in terms.items() if c}, self.var_table)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise AlgebraError("exponent must be a nonnegative integer")
        result = Polynomial.constant(1, self.var_table)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.terms == ({self.var_table.one(): Fraction(other)} if other else {})
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.var_table == other.var_table and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.var_table, frozenset(self.terms.items())))
        return self._hash

    # -- normalisation -----------------------------------------------------

    def monic(self, order: TermOrder | None = None) -> Polynomial:
        if not self.terms:
            return self
        return self.scale(1 / self.leading_coefficient(order))

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``self / c`` integral and primitive."""
        if not self.terms:
            return Fraction(0)
        nums = reduce(gcd, (c.numerator for c in self.terms.values()))
        dens = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in self.terms.values()))
        return Fraction(abs(nums), dens)

    def primitive(self, order: TermOrder | None = None) -> Polynomial:
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if not self.terms:
            return self
        p = self.scale(1 / self.content())
        if p.leading_coefficient(order) < 0:
            p = -p
        return p

    def monomial_content(self) -> Monomial:
        """Largest monomial dividing every term."""
        if not self.terms:
            return self.var_table.one()
        return tuple(min(col) for col in zip(*self.terms))

    def div_monomial(self, m: Monomial) -> Polynomial:
        return Polynomial._raw(
            {monomial_quotient(k, m): c for k, c in self.terms.items()}, self.var_table
        )

    def exact_div(self, other: Polynomial) -> Polynomial:
        """Quotient of an exact division; raises if the remainder is nonzero."""
        (q,), r = divide_reduce(self, [other], TermOrder(self.var_table))
        if r:
            raise AlgebraError("division is not exact")
        return q

    # -- substitution ------------------------------------------------------

    def evaluate(self, values: Mapping[str, object]) -> Polynomial:
        """Substitute rational values for some variables (the rest stay symbolic)."""
        idx = {self.var_table.index(k): _as_fraction(v) for k, v in values.items()}
        terms: dict = {}
        for m, c in self.terms.items():
            m2 = list(m)
            for i, v in idx.items():
                if m[i]:
                    c = c * v ** m[i]
                    m2[i] = 0
            if c:
                k = tuple(m2)
                terms[k] = terms.get(k, 0) + c
        return Polynomial._raw({m: c for m, c in terms.items() if c}, self.var_table)

    def to_univariate(self, subst: Mapping[str, int]) -> list[Fraction]:
        """Replace each variable ``v`` by ``s**subst[v]``; return coefficients in ``s``.

        Every variable occurring in the polynomial must be in ``subst``.
        """
        names = self.var_table.names
        exps = []
        for name in names:
            exps.append(subst.get(name))
        out: dict[int, Fraction] = {}
        for m, c in self.terms.items():
            d = 0
            for i, e in enumerate(m):
                if e:
                    if exps[i] is None:
                        raise AlgebraError(f"no substitution given for {names[i]!r}")
                    d += e * exps[i]
            out[d] = out.get(d, 0) + c
        top = max((d for d, c in out.items() if c), default=-1)
        return [out.get(d, Fraction(0)) for d in range(top + 1)]

    def restrict(self, var_table: VarTable) -> Polynomial:
        """Re-express over another table containing every variable that occurs."""
        src = self.var_table.names
        pos = [var_table.index(src[i]) if any(m[i] for m in self.terms) else None
               for i in range(len(src))]
        n = len(var_table)
        terms = {}
        for m, c in self.terms.items():
            e = [0] * n
            for i, x in enumerate(m):
                if x:
                    e[pos[i]] = x
            terms[tuple(e)] = c
        return Polynomial._raw(terms, var_table)

    # -- text --------------------------------------------------------------

    def to_text(self, order: TermOrder | None = None) -> str:
        """Canonical rendering, terms descending under the term order."""
        if not self.terms:
            return "0"
        names = self.var_table.names
        parts = []
        for m, c in self.sorted_terms(order):
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(names[i])
                elif e:
                    factors.append(f"{names[i]}^{e}")
            a = abs(c)
            if a != 1 or not factors:
                factors.insert(0, str(a))
            term = "*".join(factors)
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append(("- " if c < 0 else "+ ") + term)
        return " ".join(parts)

    def to_json_terms(self, order: TermOrder | None = None) -> list:
        return [[c.numerator, c.denominator, list(m)] for m, c in self.sorted_terms(order)]

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"


def poly_arith(op: str, f: Polynomial, g=None) -> Polynomial:
    """Dispatch ``add``, ``sub``, ``mul``, ``neg`` or ``scale`` by name."""
    if op == "neg":
        return -f
    if op == "scale":
        return f.scale(g)
    if isinstance(g, Polynomial) and g.var_table != f.var_table:
        raise AlgebraError("polynomials live over different variable tables")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise AlgebraError(f"unknown operation {op!r}")


def divide_reduce(
    f: Polynomial, divisors: Sequence[Polynomial], order: TermOrder
) -> tuple[list[Polynomial], Polynomial]:
    """Multivariate division with remainder.

    Returns ``(quotients, remainder)`` with ``f == sum(q*g) + remainder`` and no
    term of the remainder divisible by a divisor's leading monomial.
    """
    if not divisors:
        raise AlgebraError("divisor list is empty")
    vt = f.var_table
    for g in divisors:
        if g.var_table != vt:
            raise AlgebraError("polynomials live over different variable tables")
        if not g:
            raise AlgebraError("division by the zero polynomial")
    key = order.key
    leads = [(g.leading_monomial(order), g.leading_coefficient(order)) for g in divisors]
    quotients: list[dict] = [{} for _ in divisors]
    remainder: dict = {}
    p = dict(f.terms)
    while p:
        m = max(p, key=key)
        c = p[m]
        for i, (lm, lc) in enumerate(leads):
            if monomial_divides(lm, m):
                qm = monomial_quotient(m, lm)
                qc = c / lc
                quotients[i][qm] = quotients[i].get(qm, 0) + qc
                for gm, gc in divisors[i].terms.items():
                    t = monomial_mul(gm, qm)
                    v = p.get(t, 0) - qc * gc
                    if v:
                        p[t] = v
                    else:
                        p.pop(t, None)
                break
        else:
            remainder[m] = c
            del p[m]
    return (
        [Polynomial._raw({m: c for m, c in q.items() if c}, vt) for q in quotients],
        Polynomial._raw(remainder, vt),
    )


def s_polynomial(f: Polynomial, g: Polynomial, order: TermOrder) -> Polynomial:
    """Cancellation combination of the leading terms of ``f`` and ``g``."""
    if not f or not g:
        raise AlgebraError("S-polynomial of the zero polynomial")
    if f.var_table != g.var_table:
        raise AlgebraError("polynomials live over different variable tables")
    mf, mg = f.leading_monomial(order), g.leading_monomial(order)
    lcm = monomial_lcm(mf, mg)
    a = f.mul_term(monomial_quotient(lcm, mf), 1 / f.terms[mf])
    b = g.mul_term(monomial_quotient(lcm, mg), 1 / g.terms[mg])
    return a - b


# -- univariate helpers (coefficient lists, index = degree) -----------------

def _trim(a: list) -> list:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def univariate_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = [Fraction(x) for x in a]
    lb = Fraction(b[-1])
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] / lb
        q[k] = c
        for i, bc in enumerate(b):
            r[k + i] -= c * bc
        r = _trim(r)
    return q, r


def univariate_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    """Monic gcd of two coefficient lists (the gcd of 0 and 0 is 0)."""
    a, b = _trim(a), _trim(b)
    while b:
        _, r = univariate_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = Fraction(a[-1])
    return [Fraction(x) / lead for x in a]


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def parse_polynomial(text: str, var_table: VarTable) -> Polynomial:
    """Parse the rendering syntax (``3/4*x^2*y - z + 1``); parentheses are allowed."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise AlgebraError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("name", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    tokens.append(("end", None))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expect_op(op):
        tok = take()
        if tok != ("op", op):
            raise AlgebraError(f"expected {op!r}, got {tok[1]!r}")

    def expr():
        sign = 1
        if peek() in (("op", "-"), ("op", "+")):
            sign = -1 if take()[1] == "-" else 1
        acc = term().scale(sign)
        while peek() in (("op", "-"), ("op", "+")):
            op = take()[1]
            t = term()
            acc = acc - t if op == "-" else acc + t
        return acc

    def term():
        acc = power()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            if op == "*":
                acc = acc * power()
            else:
                d = power()
                if len(d.terms) != 1 or d.var_table.one() not in d.terms:
                    raise AlgebraError("can only divide by a nonzero constant")
                acc = acc.scale(1 / d.terms[d.var_table.one()])
        return acc

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "num":
                raise AlgebraError("exponent must be a nonnegative integer literal")
            base = base ** val
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return Polynomial.constant(val, var_table)
        if kind == "name":
            return Polynomial.variable(val, var_table)
        if (kind, val) == ("op", "("):
            e = expr()
            expect_op(")")
            return e
        if (kind, val) == ("op", "-"):
            return -power()
        raise AlgebraError(f"unexpected token {val!r}")

    result = expr()
    if peek()[0] != "end":
        raise AlgebraError(f"trailing input at token {peek()[1]!r}")
    return result
