"""Reduced Gröbner bases by Buchberger's algorithm, plus elimination and membership."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .algebra import (
    AlgebraError,
    Polynomial,
    TermOrder,
    divide_reduce,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
    monomial_quotient,
)

__all__ = [
    "Cancelled",
    "CancelToken",
    "GroebnerBasis",
    "buchberger",
    "elimination_ideal",
    "ideal_membership",
    "normal_form",
]


class Cancelled(RuntimeError):
    """Raised when a cancellation token fires during a long computation."""


class CancelToken:
    """Cooperative cancellation flag, safe to set from a signal handler or thread."""

    def __init__(self):
        self._event = threading.Event()

    def cancel(self):
        self._event.set()

    @property
    def cancelled(self) -> bool:
        return self._event.is_set()

    def check(self):
        if self._event.is_set():
            raise Cancelled("computation cancelled")


@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple[Polynomial, ...]
    order: TermOrder

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    def to_text(self) -> str:
        return "\n".join(g.to_text(self.order) for g in self.generators)


def normal_form(f: Polynomial, basis: Iterable[Polynomial], order: TermOrder) -> Polynomial:
    """Full reduction of ``f`` modulo ``basis`` (remainder only)."""
    basis = [g for g in basis if g]
    if not basis:
        return f
    return _reduce(dict(f.terms), _leads(basis, order), order, f.var_table)


def _leads(basis, order):
    out = []
    for g in basis:
        lm = g.leading_monomial(order)
        out.append((lm, g.terms[lm], g.terms))
    return out


def _reduce(p: dict, leads, order: TermOrder, var_table) -> Polynomial:
    key = order.key
    rem = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, lc, gterms in leads:
            if monomial_divides(lm, m):
                qm = monomial_quotient(m, lm)
                qc = c / lc
                for gm, gc in gterms.items():
                    t = monomial_mul(gm, qm)
                    v = p.get(t, 0) - qc * gc
                    if v:
                        p[t] = v
                    else:
                        p.pop(t, None)
                break
        else:
            rem[m] = c
            del p[m]
    return Polynomial._raw(rem, var_table)


def _coprime(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def buchberger(
    generators: Iterable[Polynomial],
    order: TermOrder,
    cancel: CancelToken | None = None,
) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal spanned by ``generators``.

    Pairs are processed by the normal strategy (smallest lcm of leading
    monomials first) and pruned with the Gebauer-Möller installation of
    Buchberger's product and chain criteria.
    """
    gens = [g for g in generators if g]
    if not gens:
        raise AlgebraError("zero ideal")
    vt = gens[0].var_table
    for g in gens:
        if g.var_table != vt:
            raise AlgebraError("polynomials live over different variable tables")
    key = order.key

    polys: list[Polynomial] = []
    lms: list = []
    basis: list[int] = []
    pairs: dict[tuple[int, int], tuple] = {}

    def install(h: Polynomial):
        h = h.monic(order)
        hi = len(polys)
        polys.append(h)
        lmh = h.leading_monomial(order)
        lms.append(lmh)

        # chain criterion among the new pairs
        pending = [(g, monomial_lcm(lmh, lms[g])) for g in basis]
        kept = []
        while pending:
            g, lcm = pending.pop(0)
            if _coprime(lmh, lms[g]) or not any(
                monomial_divides(other, lcm) for _, other in pending + kept
            ):
                kept.append((g, lcm))
        # product criterion
        new_pairs = [(g, lcm) for g, lcm in kept if not _coprime(lmh, lms[g])]

        for (a, b), lcm in list(pairs.items()):
            if (
                monomial_divides(lmh, lcm)
                and monomial_lcm(lms[a], lmh) != lcm
                and monomial_lcm(lms[b], lmh) != lcm
            ):
                del pairs[(a, b)]
        for g, lcm in new_pairs:
            pairs[(g, hi)] = lcm

        basis[:] = [g for g in basis if not monomial_divides(lmh, lms[g])]
        basis.append(hi)

    for g in gens:
        h = normal_form(g, [polys[i] for i in basis], order) if basis else g
        if h:
            install(h)

    while pairs:
        if cancel is not None:
            cancel.check()
        pair = min(pairs, key=lambda p: (key(pairs[p]), p))
        del pairs[pair]
        a, b = pair
        s = _spoly(polys[a], lms[a], polys[b], lms[b])
        h = _reduce(dict(s.terms), _leads([polys[i] for i in basis], order), order, vt)
        if h:
            install(h)

    return GroebnerBasis(tuple(_interreduce([polys[i] for i in basis], order)), order)


def _spoly(f, mf, g, mg):
    lcm = monomial_lcm(mf, mg)
    a = f.mul_term(monomial_quotient(lcm, mf), 1 / f.terms[mf])
    b = g.mul_term(monomial_quotient(lcm, mg), 1 / g.terms[mg])
    return a - b


def _interreduce(basis: list[Polynomial], order: TermOrder) -> list[Polynomial]:
    key = order.key
    basis = sorted((g.monic(order) for g in basis), key=lambda g: key(g.leading_monomial(order)))
    minimal = []
    for g in basis:
        lm = g.leading_monomial(order)
        if not any(monomial_divides(h.leading_monomial(order), lm) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        lm = g.leading_monomial(order)
        tail = dict(g.terms)
        del tail[lm]
        r = _reduce(tail, _leads(others, order), order, g.var_table) if others else \
            Polynomial._raw(tail, g.var_table)
        out.append(r + Polynomial._raw({lm: Fraction(1)}, g.var_table))
    return sorted(out, key=lambda g: key(g.leading_monomial(order)))


def elimination_ideal(basis: GroebnerBasis, keep: Iterable[str]) -> list[Polynomial]:
    """Basis elements involving only the variables in ``keep``.

    ``keep`` must be a union of trailing blocks of the variable table, which is
    what makes the result a Gröbner basis of the elimination ideal.
    """
    keep = frozenset(keep)
    vt = basis.order.var_table
    for name in keep:
        vt.index(name)
    if keep not in vt.trailing_sets():
        raise AlgebraError(f"variables {sorted(keep)} are not a union of trailing blocks")
    return [g for g in basis.generators if g.variables() <= keep]


def ideal_membership(f: Polynomial, basis: GroebnerBasis) -> bool:
    if not f:
        return True
    _, r = divide_reduce(f, list(basis.generators), basis.order)
    return not r
