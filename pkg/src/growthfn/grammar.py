"""Weighted grammars: text format, well-posedness checks, polynomial translation.

File format (``#`` starts a comment)::

    start    S
    weights  x y
    terminal a weight x
    terminal b weight y
    rule     S -> eps | a S b

A terminal declared without ``weight`` gets the first weight variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Polynomial, VarTable

__all__ = [
    "Alternative",
    "Diagnostic",
    "Grammar",
    "GrammarError",
    "PolySystem",
    "parse_grammar",
    "to_poly_system",
    "validate",
]

EPS = "eps"

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"->|\||[^\s|]+")


class GrammarError(ValueError):
    """Malformed or ill-posed grammar; carries a 1-based source position when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    kind: str  # "unproductive" | "unreachable" | "unit-cycle"
    symbols: tuple[str, ...]

    @property
    def message(self) -> str:
        return f"{self.kind}: {', '.join(self.symbols)}"

    def __str__(self):
        return f"{self.severity}: {self.message}"


@dataclass(frozen=True)
class Alternative:
    symbols: tuple[str, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.symbols

    def __str__(self):
        return " ".join(self.symbols) if self.symbols else EPS


@dataclass(frozen=True)
class Grammar:
    start: str
    weight_vars: tuple[str, ...]
    terminals: dict  # name -> exponent tuple over weight_vars
    nonterminals: tuple[str, ...]
    productions: dict  # nonterminal -> tuple[Alternative, ...]

    def is_terminal(self, name: str) -> bool:
        return name in self.terminals

    def weight_text(self, name: str) -> str:
        factors = []
        for v, e in zip(self.weight_vars, self.terminals[name]):
            if e == 1:
                factors.append(v)
            elif e:
                factors.append(f"{v}^{e}")
        return "*".join(factors)

    def to_text(self) -> str:
        lines = [f"start {self.start}", "weights " + " ".join(self.weight_vars)]
        for name in self.terminals:
            lines.append(f"terminal {name} weight {self.weight_text(name)}")
        for nt in self.nonterminals:
            alts = " | ".join(str(a) for a in self.productions[nt])
            lines.append(f"rule {nt} -> {alts}")
        return "\n".join(lines) + "\n"

    def nullable(self) -> set[str]:
        """Nonterminals deriving the empty word."""
        out: set[str] = set()
        changed = True
        while changed:
            changed = False
            for nt in self.nonterminals:
                if nt in out:
                    continue
                if any(all(s in out for s in alt.symbols) for alt in self.productions[nt]):
                    out.add(nt)
                    changed = True
        return out


@dataclass(frozen=True)
class PolySystem:
    """One polynomial ``U - rhs(U)`` per nonterminal ``U``."""

    equations: tuple[Polynomial, ...]
    var_table: VarTable
    unknowns: tuple[str, ...]
    start: str
    weight_vars: tuple[str, ...] = field(default=())

    def equation_for(self, name: str) -> Polynomial:
        return self.equations[self.unknowns.index(name)]


def _parse_monomial(text: str, weights: tuple[str, ...], line: int, col: int) -> tuple:
    exps = [0] * len(weights)
    for factor in text.split("*"):
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?", factor)
        if not m:
            raise GrammarError(f"malformed weight monomial {text!r}", line, col)
        name, power = m.group(1), int(m.group(2) or 1)
        if name not in weights:
            raise GrammarError(f"malformed weight monomial {text!r}: {name!r} is not a weight variable",
                               line, col)
        exps[weights.index(name)] += power
    if not any(exps):
        raise GrammarError(f"malformed weight monomial {text!r}: weight must be non-constant", line, col)
    return tuple(exps)


def parse_grammar(text: str) -> Grammar:
    """Parse the grammar text format; raises :class:`GrammarError` with a position."""
    start = None
    weights = None
    raw_terminals: list = []  # (name, weight text | None, line, col, wcol)
    raw_rules: list = []  # (lhs, [alt tokens], line, col)

    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(body)]
        if not toks:
            continue
        head, hcol = toks[0]
        args = toks[1:]
        if head == "start":
            if start is not None:
                raise GrammarError("duplicate declaration: start", lineno, hcol)
            if len(args) != 1 or not _NAME.fullmatch(args[0][0]):
                raise GrammarError("expected: start <nonterminal>", lineno, hcol)
            start = (args[0][0], lineno, args[0][1])
        elif head == "weights":
            if weights is not None:
                raise GrammarError("duplicate declaration: weights", lineno, hcol)
            if not args:
                raise GrammarError("expected: weights <var> [<var> ...]", lineno, hcol)
            names = []
            for name, col in args:
                if not _NAME.fullmatch(name):
                    raise GrammarError(f"bad weight variable name {name!r}", lineno, col)
                if name in names:
                    raise GrammarError(f"duplicate declaration: weight variable {name}", lineno, col)
                names.append(name)
            weights = tuple(names)
        elif head == "terminal":
            if len(args) == 1:
                raw_terminals.append((args[0][0], None, lineno, args[0][1], None))
            elif len(args) == 3 and args[1][0] == "weight":
                raw_terminals.append((args[0][0], args[2][0], lineno, args[0][1], args[2][1]))
            else:
                raise GrammarError("expected: terminal <name> [weight <monomial>]", lineno, hcol)
            if not _NAME.fullmatch(args[0][0]) or args[0][0] == EPS:
                raise GrammarError(f"bad terminal name {args[0][0]!r}", lineno, args[0][1])
        elif head == "rule":
            if len(args) < 3 or args[1][0] != "->":
                raise GrammarError("expected: rule <nonterminal> -> <alt> ( | <alt> )*", lineno, hcol)
            lhs, lcol = args[0]
            if not _NAME.fullmatch(lhs) or lhs == EPS:
                raise GrammarError(f"bad nonterminal name {lhs!r}", lineno, lcol)
            alts: list[list] = [[]]
            for tok, col in args[2:]:
                if tok == "|":
                    alts.append([])
                elif tok == "->":
                    raise GrammarError("unexpected '->'", lineno, col)
                else:
                    if not _NAME.fullmatch(tok):
                        raise GrammarError(f"bad symbol {tok!r}", lineno, col)
                    alts[-1].append((tok, col))
            raw_rules.append((lhs, alts, lineno, lcol))
        else:
            raise GrammarError(f"unknown directive {head!r}", lineno, hcol)

    if start is None:
        raise GrammarError("no start symbol")
    if weights is None:
        raise GrammarError("no weight variables declared (missing 'weights' line)")

    terminals: dict = {}
    for name, wtext, line, col, wcol in raw_terminals:
        if name in terminals:
            raise GrammarError(f"duplicate declaration: terminal {name}", line, col)
        if name in weights:
            raise GrammarError(f"duplicate declaration: {name} is a weight variable", line, col)
        if wtext is None:
            exps = (1,) + (0,) * (len(weights) - 1)
        else:
            exps = _parse_monomial(wtext, weights, line, wcol)
        terminals[name] = exps

    nonterminals: list[str] = []
    productions: dict = {}
    for lhs, alts, line, col in raw_rules:
        if lhs in terminals:
            raise GrammarError(f"duplicate declaration: {lhs} is a terminal", line, col)
        if lhs in weights:
            raise GrammarError(f"duplicate declaration: {lhs} is a weight variable", line, col)
        if lhs not in productions:
            nonterminals.append(lhs)
            productions[lhs] = []
    for lhs, alts, line, col in raw_rules:
        for alt in alts:
            if not alt:
                raise GrammarError("empty alternative (write 'eps')", line, col)
            names = [s for s, _ in alt]
            if EPS in names:
                if len(names) != 1:
                    raise GrammarError("'eps' must stand alone in an alternative", line, alt[0][1])
                productions[lhs].append(Alternative(()))
                continue
            for sym, scol in alt:
                if sym not in terminals and sym not in productions:
                    raise GrammarError(f"unknown symbol {sym!r}", line, scol)
            productions[lhs].append(Alternative(tuple(names)))

    sname, sline, scol = start
    if sname not in productions:
        raise GrammarError(f"start symbol {sname!r} has no rule", sline, scol)
    return Grammar(
        start=sname,
        weight_vars=weights,
        terminals=terminals,
        nonterminals=tuple(nonterminals),
        productions={k: tuple(v) for k, v in productions.items()},
    )


def _find_cycle(edges: dict) -> list[str] | None:
    color: dict = {}
    stack: list = []

    def dfs(u):
        color[u] = 1
        stack.append(u)
        for v in edges.get(u, ()):
            if color.get(v) == 1:
                return stack[stack.index(v):] + [v]
            if v not in color:
                found = dfs(v)
                if found:
                    return found
        stack.pop()
        color[u] = 2
        return None

    for u in edges:
        if u not in color:
            found = dfs(u)
            if found:
                return found
    return None


def validate(g: Grammar) -> list[Diagnostic]:
    """Unproductive symbols and weight-free derivation cycles are errors; unreachable symbols warn."""
    diags = []

    productive: set[str] = set()
    changed = True
    while changed:
        changed = False
        for nt in g.nonterminals:
            if nt not in productive and any(
                all(g.is_terminal(s) or s in productive for s in alt.symbols)
                for alt in g.productions[nt]
            ):
                productive.add(nt)
                changed = True
    dead = tuple(nt for nt in g.nonterminals if nt not in productive)
    if dead:
        diags.append(Diagnostic("error", "unproductive", dead))

    reach = {g.start}
    todo = [g.start]
    while todo:
        u = todo.pop()
        for alt in g.productions[u]:
            for s in alt.symbols:
                if not g.is_terminal(s) and s not in reach:
                    reach.add(s)
                    todo.append(s)
    unused = tuple(nt for nt in g.nonterminals if nt not in reach)
    if unused:
        diags.append(Diagnostic("warning", "unreachable", unused))

    # A =>+ A without emitting a terminal: infinitely many derivations per word.
    nullable = g.nullable()
    edges: dict = {}
    for nt in g.nonterminals:
        for alt in g.productions[nt]:
            if any(g.is_terminal(s) for s in alt.symbols):
                continue
            for i, s in enumerate(alt.symbols):
                rest = alt.symbols[:i] + alt.symbols[i + 1:]
                if all(r in nullable for r in rest):
                    edges.setdefault(nt, []).append(s)
    cycle = _find_cycle(edges)
    if cycle:
        diags.append(Diagnostic("error", "unit-cycle", tuple(cycle)))
    return diags


def to_poly_system(g: Grammar) -> PolySystem:
    """Translate each rule ``U -> a1 | ... | ak`` into the polynomial ``U - sum(a_j)``."""
    errors = [d for d in validate(g) if d.severity == "error"]
    if errors:
        raise GrammarError("; ".join(d.message for d in errors))
    aux = tuple(nt for nt in g.nonterminals if nt != g.start)
    vt = VarTable(eliminate=aux, retain=(g.start,), weights=g.weight_vars)
    names = vt.names
    w_offset = len(aux) + 1
    nt_index = {n: names.index(n) for n in g.nonterminals}

    equations = []
    for nt in g.nonterminals:
        terms: dict = {vt.var(nt): Fraction(1)}
        for alt in g.productions[nt]:
            exps = [0] * len(names)
            for s in alt.symbols:
                if g.is_terminal(s):
                    for k, e in enumerate(g.terminals[s]):
                        exps[w_offset + k] += e
                else:
                    exps[nt_index[s]] += 1
            m = tuple(exps)
            terms[m] = terms.get(m, 0) - 1
        equations.append(Polynomial(terms, vt))
    return PolySystem(
        equations=tuple(equations),
        var_table=vt,
        unknowns=g.nonterminals,
        start=g.start,
        weight_vars=g.weight_vars,
    )
