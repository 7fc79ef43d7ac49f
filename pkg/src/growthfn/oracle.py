"""Brute-force enumeration of a grammar's language, stratified by substituted weight.

Sentential forms are expanded at their leftmost nonterminal and processed in
increasing order of a lower bound on the weight of any word they can still
produce, so when enumeration stops early every degree below the current
bound is already exact.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping

from .grammar import Grammar, GrammarError, validate

__all__ = [
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "OracleError",
    "WeightCounts",
    "ambiguity_witness",
    "enumerate_language",
]

DEFAULT_BUDGET = 10_000_000


class OracleError(ValueError):
    pass


class BudgetExceeded(OracleError):
    """Node budget ran out; ``partial`` holds the counts, exact below ``weight``."""

    def __init__(self, weight: int, partial: "WeightCounts"):
        self.weight = weight
        self.partial = partial
        super().__init__(f"budget exceeded at weight {weight}")


@dataclass
class WeightCounts:
    bound: int
    words: dict = field(default_factory=dict)
    derivations: dict = field(default_factory=dict)
    complete: bool = True
    nodes: int = 0

    def word_list(self) -> list[int]:
        return [self.words.get(d, 0) for d in range(self.bound + 1)]

    def derivation_list(self) -> list[int]:
        return [self.derivations.get(d, 0) for d in range(self.bound + 1)]


def _terminal_weights(g: Grammar, subst: Mapping[str, int] | None) -> dict[str, int]:
    if subst is None:
        subst = {v: 1 for v in g.weight_vars}
    for k, e in subst.items():
        if k not in g.weight_vars:
            raise OracleError(f"substitution for unknown weight variable {k!r}")
        if not isinstance(e, int) or e < 1:
            # exponent 0 would allow infinitely many words of one degree
            raise OracleError(f"substitution exponent for {k!r} must be an integer >= 1, got {e!r}")
    missing = [v for v in g.weight_vars if v not in subst]
    if missing:
        raise OracleError(f"no substitution given for {', '.join(missing)}")
    return {
        name: sum(e * subst[v] for v, e in zip(g.weight_vars, exps))
        for name, exps in g.terminals.items()
    }


def _min_weights(g: Grammar, tw: dict[str, int]) -> dict[str, float]:
    best = {nt: float("inf") for nt in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for nt in g.nonterminals:
            for alt in g.productions[nt]:
                w = sum(tw[s] if s in tw else best[s] for s in alt.symbols)
                if w < best[nt]:
                    best[nt] = w
                    changed = True
    return best


def enumerate_language(
    g: Grammar,
    subst: Mapping[str, int] | None = None,
    N: int = 10,
    budget: int = DEFAULT_BUDGET,
    debug: bool = False,
) -> WeightCounts:
    """Count distinct words and leftmost derivations of each weight ``0..N``."""
    if N < 0:
        raise OracleError("bound must be >= 0")
    errors = [d for d in validate(g) if d.severity == "error"]
    if errors:
        raise GrammarError("; ".join(d.message for d in errors))
    tw = _terminal_weights(g, subst)
    minw = _min_weights(g, tw)

    # expansions[nt] = list of (terminals-before-first-nonterminal, rest, weight delta)
    expansions = {}
    for nt in g.nonterminals:
        exp = []
        for alt in g.productions[nt]:
            exp.append((alt.symbols, sum(tw[s] if s in tw else minw[s] for s in alt.symbols)))
        expansions[nt] = exp

    words: dict[int, set] = defaultdict(set)
    derivations: dict[int, int] = defaultdict(int)
    # bucket[b]: forms (prefix, pending symbols, terminal weight so far) with lower bound b
    buckets: dict[int, list] = defaultdict(list)
    buckets[int(minw[g.start])].append(((), (g.start,), 0))
    nodes = 1

    def finish(level):
        return WeightCounts(
            bound=N,
            words={d: len(words[d]) for d in range(N + 1) if d < level},
            derivations={d: derivations[d] for d in range(N + 1) if d < level},
            complete=level > N,
            nodes=nodes,
        )

    for level in range(N + 1):
        queue = buckets.pop(level, [])
        while queue:
            prefix, pending, acc = queue.pop()
            i = 0
            while i < len(pending) and pending[i] in tw:
                i += 1
            if i:
                prefix = prefix + pending[:i]
                pending = pending[i:]
            if not pending:
                if debug:
                    assert sum(tw[s] for s in prefix) == acc == level, prefix
                words[level].add(prefix)
                derivations[level] += 1
                continue
            nt, tail = pending[0], pending[1:]
            base = level - minw[nt]
            for symbols, delta in expansions[nt]:
                lower = base + delta
                if lower > N:
                    continue
                nodes += 1
                if nodes > budget:
                    raise BudgetExceeded(level, finish(level))
                added = sum(tw[s] for s in symbols if s in tw)
                form = (prefix, symbols + tail, acc + added)
                if lower == level:
                    queue.append(form)
                else:
                    buckets[int(lower)].append(form)
    return finish(N + 1)


def ambiguity_witness(
    g: Grammar,
    subst: Mapping[str, int] | None = None,
    N: int = 10,
    budget: int = DEFAULT_BUDGET,
) -> tuple[int, int, int] | None:
    """First ``(degree, words, derivations)`` with more derivations than words, if any."""
    counts = enumerate_language(g, subst, N, budget)
    for d in range(N + 1):
        w, n = counts.words.get(d, 0), counts.derivations.get(d, 0)
        if n > w:
            return d, w, n
    return None
