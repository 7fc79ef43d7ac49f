"""Command-line front end: ``growthfn {solve,series,enumerate,check} FILE ...``.

Exit codes: 0 success, 1 check mismatch, 2 input error, 3 computation error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import signal
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from importlib.resources import files
from pathlib import Path

from .algebra import AlgebraError, Polynomial, TermOrder
from .grammar import Grammar, GrammarError, parse_grammar, to_poly_system, validate
from .groebner import Cancelled, CancelToken
from .oracle import DEFAULT_BUDGET, OracleError, enumerate_language
from .solve import GrowthResult, SolveError, series_algebraic, series_rational, solve

REPORT_VERSION = 1

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_COMPUTE = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    input: dict
    method: str | None = None
    result: dict | None = None
    basis: list | None = None
    series: dict | None = None
    oracle: dict | None = None
    check: dict | None = None
    diagnostics: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def to_json(self) -> str:
        body = {"growthfn_report": REPORT_VERSION, "command": self.command, "input": self.input}
        for key in ("method", "result", "basis", "series", "oracle", "check"):
            value = getattr(self, key)
            if value is not None:
                body[key] = value
        body["diagnostics"] = self.diagnostics
        body["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return json.dumps(body, indent=2)

    def to_text(self) -> str:
        lines = [f"command: {self.command}", f"input: {self.input['path']}",
                 f"sha256: {self.input['sha256']}"]
        if self.method:
            lines.append(f"method: {self.method}")
        if self.result:
            lines.append(f"equation: {self.result['equation']['text']} = 0")
            if "rational" in self.result:
                r = self.result["rational"]
                lines.append(f"closed form: ({r['numerator']['text']}) / ({r['denominator']['text']})")
        if self.basis is not None:
            lines.append("groebner basis:")
            lines.extend(f"  {p['text']}" for p in self.basis)
        if self.series:
            lines.append(f"series ({self.series['variable']}, order {self.series['order']}): "
                         + ", ".join(str(c) for c in self.series["coefficients"]))
        if self.oracle:
            lines.append("words: " + ", ".join(map(str, self.oracle["words"])))
            lines.append("derivations: " + ", ".join(map(str, self.oracle["derivations"])))
            w = self.oracle.get("ambiguity_witness")
            if w:
                lines.append(f"ambiguity witness: degree {w[0]}: {w[1]} words, {w[2]} derivations")
        if self.check:
            lines.append(f"check: {'agree' if self.check['agree'] else 'MISMATCH'}"
                         f" (compared {self.check['compared']})")
            for m in self.check["mismatches"]:
                lines.append(f"  degree {m['degree']}: {m['what']} {m['left']} != {m['right']}")
        for d in self.diagnostics:
            lines.append(f"diagnostic: {d}")
        lines.append("timings: " + ", ".join(f"{k}={v:.3f}s" for k, v in self.timings.items()))
        return "\n".join(lines)


def _poly_json(p: Polynomial) -> dict:
    order = TermOrder(p.var_table)
    return {"text": p.to_text(order), "variables": list(p.var_table.names),
            "terms": p.to_json_terms(order)}


def _coeff_json(c):
    return c if isinstance(c, int) else str(c)


def resolve_grammar_path(name: str) -> Path:
    path = Path(name)
    if path.is_file():
        return path
    corpus = files("growthfn.corpus")
    for candidate in (path.name, path.name + ".grm"):
        bundled = corpus.joinpath(candidate)
        if bundled.is_file():
            return Path(str(bundled))
    raise InputError(f"no such grammar file: {name}")


def parse_subst(text: str | None, g: Grammar) -> dict[str, int]:
    if text is None:
        return {v: 1 for v in g.weight_vars}
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not value.strip().isdigit():
            raise InputError(f"bad substitution {item!r}: expected var=k with integer k >= 1")
        if name not in g.weight_vars:
            raise InputError(f"bad substitution {item!r}: {name!r} is not a weight variable")
        k = int(value)
        if k < 1:
            raise InputError(f"bad substitution {item!r}: exponent must be >= 1")
        out[name] = k
    for v in g.weight_vars:
        out.setdefault(v, 1)
    return out


def parse_expect(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad --expect list {text!r}") from None


@contextmanager
def _interruptible(token: CancelToken):
    def handler(signum, frame):
        token.cancel()

    try:
        previous = signal.signal(signal.SIGINT, handler)
    except ValueError:  # not in the main thread
        yield
        return
    try:
        yield
    finally:
        signal.signal(signal.SIGINT, previous)


class _Timer:
    def __init__(self, report: RunReport):
        self.report = report

    @contextmanager
    def phase(self, name):
        t = time.perf_counter()
        try:
            yield
        finally:
            self.report.timings[name] = time.perf_counter() - t


def _load(args, report: RunReport, timer: _Timer) -> Grammar:
    path = resolve_grammar_path(args.file)
    data = path.read_bytes()
    report.input = {"path": args.file, "sha256": hashlib.sha256(data).hexdigest()}
    with timer.phase("parse"):
        try:
            g = parse_grammar(data.decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise InputError(f"grammar file is not UTF-8: {exc}") from None
        diags = validate(g)
    for d in diags:
        report.diagnostics.append(str(d))
    errors = [d for d in diags if d.severity == "error"]
    if errors:
        raise GrammarError("; ".join(d.message for d in errors))
    return g


def _solve(g: Grammar, method: str, report: RunReport, timer: _Timer, dump_basis=False) -> GrowthResult:
    token = CancelToken()
    with timer.phase("solve"), _interruptible(token):
        result = solve(to_poly_system(g), method, cancel=token)
    report.method = result.method
    report.result = {"equation": _poly_json(result.equation.poly),
                     "degree_in_start": result.equation.degF}
    if result.rational is not None:
        report.result["rational"] = {
            "numerator": _poly_json(result.rational.numerator),
            "denominator": _poly_json(result.rational.denominator),
        }
    for note in result.notes:
        report.diagnostics.append(f"note: {note}")
    if dump_basis:
        if result.basis is None:
            report.diagnostics.append("note: --dump-basis needs the groebner method")
        else:
            report.basis = [_poly_json(p) for p in result.basis]
    return result


def _series(g: Grammar, result: GrowthResult, subst, n: int, report: RunReport, timer: _Timer):
    with timer.phase("series"):
        if result.rational is not None:
            s = series_rational(result.rational, subst, n)
        else:
            c0 = 1 if g.start in g.nullable() else 0
            s = series_algebraic(result.equation, c0, subst, n)
    report.series = {"variable": s.variable, "order": s.order, "substitution": subst,
                     "coefficients": [_coeff_json(c) for c in s.coefficients]}
    return s


def _enumerate(g: Grammar, subst, n: int, budget: int, report: RunReport, timer: _Timer):
    with timer.phase("enumerate"):
        counts = enumerate_language(g, subst, n, budget)
    words, derivs = counts.word_list(), counts.derivation_list()
    witness = next(((d, w, k) for d, (w, k) in enumerate(zip(words, derivs)) if k > w), None)
    report.oracle = {"order": n, "substitution": subst, "words": words, "derivations": derivs,
                     "nodes": counts.nodes, "ambiguity_witness": list(witness) if witness else None}
    if witness:
        report.diagnostics.append(
            f"warning: ambiguous grammar: degree {witness[0]} has {witness[1]} words "
            f"but {witness[2]} derivations"
        )
    return counts, witness


def cmd_solve(args, report, timer):
    g = _load(args, report, timer)
    _solve(g, args.method, report, timer, dump_basis=args.dump_basis)
    return EXIT_OK


def cmd_series(args, report, timer):
    g = _load(args, report, timer)
    subst = parse_subst(args.subst, g)
    result = _solve(g, args.method, report, timer)
    _series(g, result, subst, args.n, report, timer)
    return EXIT_OK


def cmd_enumerate(args, report, timer):
    g = _load(args, report, timer)
    subst = parse_subst(args.subst, g)
    _enumerate(g, subst, args.n, args.budget, report, timer)
    return EXIT_OK


def cmd_check(args, report, timer):
    g = _load(args, report, timer)
    subst = parse_subst(args.subst, g)
    expect = parse_expect(args.expect) if args.expect else None
    result = _solve(g, args.method, report, timer)
    series = _series(g, result, subst, args.n, report, timer)
    counts, witness = _enumerate(g, subst, args.n, args.budget, report, timer)
    oracle_side = counts.derivation_list() if witness else counts.word_list()
    label = "derivations" if witness else "words"
    mismatches = []
    for d, (a, b) in enumerate(zip(series.coefficients, oracle_side)):
        if a != b:
            mismatches.append({"degree": d, "what": f"series vs {label}", "left": _coeff_json(a),
                               "right": b})
    if expect is not None:
        for d, e in enumerate(expect[: args.n + 1]):
            if series.coefficients[d] != e:
                mismatches.append({"degree": d, "what": "series vs expected",
                                   "left": _coeff_json(series.coefficients[d]), "right": e})
            if oracle_side[d] != e:
                mismatches.append({"degree": d, "what": f"{label} vs expected",
                                   "left": oracle_side[d], "right": e})
    mismatches.sort(key=lambda m: m["degree"])
    report.check = {"agree": not mismatches, "compared": f"series vs oracle {label}"
                    + (" and expected" if expect is not None else ""),
                    "first_mismatch": mismatches[0]["degree"] if mismatches else None,
                    "mismatches": mismatches}
    return EXIT_OK if not mismatches else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="growthfn",
        description="Growth series of weighted context-free grammars.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, method=True, counting=True):
        p.add_argument("file", help="grammar file (or the name of a bundled corpus file)")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        if method:
            p.add_argument("--method", choices=("auto", "groebner", "linear"), default="auto")
        if counting:
            p.add_argument("--subst", metavar="v=k,...",
                           help="weight variable exponents (default: every variable -> 1)")
            p.add_argument("-n", type=int, default=10, help="truncation order (default 10)")

    p = sub.add_parser("solve", help="functional equation and closed form")
    common(p, counting=False)
    p.add_argument("--dump-basis", action="store_true", help="print the full Groebner basis")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("series", help="power series coefficients of the growth function")
    common(p)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("enumerate", help="brute-force word and derivation counts")
    common(p, method=False)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="sentential form budget")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("check", help="compare solver series against brute-force counts")
    common(p)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="sentential form budget")
    p.add_argument("--expect", metavar="c0,c1,...", help="reference coefficients to compare too")
    p.set_defaults(func=cmd_check)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    if getattr(args, "n", 0) < 0:
        print("error: -n must be >= 0", file=stderr)
        return EXIT_INPUT
    report = RunReport(command=args.command, input={"path": args.file, "sha256": None})
    timer = _Timer(report)
    try:
        code = args.func(args, report, timer)
    except (InputError, GrammarError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except Cancelled:
        print("error: interrupted", file=stderr)
        return EXIT_COMPUTE
    except (SolveError, OracleError, AlgebraError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_COMPUTE
    for d in report.diagnostics:
        print(d, file=stderr)
    print(report.to_json() if args.json else report.to_text(), file=stdout)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
