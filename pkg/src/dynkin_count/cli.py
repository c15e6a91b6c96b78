"""``dynkin-count`` command line.

Exit codes: 0 success, 2 parse error, 3 route disagreement or failed check,
4 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from . import counting, series, weyl
from .diagram import (
    Diagram,
    DiagramError,
    connected_types,
    coxeter_number,
    parse_diagram,
    weyl_order,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DISAGREE = 3
EXIT_BUDGET = 4

ROUTES = ("closed", "recursive", "oracle")


@dataclass(frozen=True)
class Report:
    spec: str
    e: int
    route: str
    factorization: Dict[int, int]
    breakdown: Optional[counting.CountBreakdown] = None
    timing_ms: Optional[float] = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec,
            "e": str(self.e),
            "route": self.route,
            "factorization": {str(p): k for p, k in sorted(self.factorization.items())},
            "breakdown": self.breakdown.to_dict() if self.breakdown else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        bd = data.get("breakdown")
        return cls(
            spec=data["spec"],
            e=int(data["e"]),
            route=data["route"],
            factorization={int(p): int(k) for p, k in data["factorization"].items()},
            breakdown=counting.CountBreakdown.from_dict(bd) if bd else None,
        )


def fmt(x: int) -> str:
    """Group digits with underscores for text output."""
    return f"{x:_}"


def render_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for row in rows:
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def _emit(args, payload, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _timing(args, label: str, ms: float) -> None:
    if getattr(args, "timing", False):
        print(f"# {label}: {ms:.1f} ms", file=sys.stderr)


def _oracle(d: Diagram, args) -> int:
    parts = []
    for c in d:
        rs = weyl.build_root_system(c)
        parts.append((c.rank, weyl.count_chain_factorizations(
            rs, budget=args.budget, memo=args.memo, jobs=args.jobs)))
    return counting.shuffle(parts)


def run_route(d: Diagram, route: str, args) -> Report:
    t0 = time.perf_counter()
    if route == "closed":
        e = counting.e_of(d)
    elif route == "recursive":
        e = counting.e_recursive(d)
    elif route == "oracle":
        e = _oracle(d, args)
    else:
        raise ValueError(f"unknown route {route!r}")
    ms = (time.perf_counter() - t0) * 1000
    breakdown = None
    if route == "recursive" and d.is_connected() and d.rank > 1:
        breakdown = counting.e_breakdown(d.components[0])
    return Report(d.render(), e, route, counting.factorize(e), breakdown, ms)


# -- subcommands ------------------------------------------------------------

def cmd_count(args) -> int:
    d = parse_diagram(args.spec)
    routes = [r.strip() for r in args.routes.split(",") if r.strip()]
    for r in routes:
        if r not in ROUTES:
            print(f"error: unknown route {r!r} (choose from {', '.join(ROUTES)})", file=sys.stderr)
            return EXIT_PARSE
    reports = []
    for r in routes:
        rep = run_route(d, r, args)
        _timing(args, r, rep.timing_ms)
        reports.append(rep)
    values = {rep.e for rep in reports}
    agree = len(values) == 1
    if args.json:
        _emit(args, {"reports": [r.to_dict() for r in reports], "agree": agree}, "")
    else:
        rows = [[r.route, fmt(r.e), counting.format_factorization(r.factorization)] for r in reports]
        print(f"e({d.render()})")
        print(render_table(["route", "e", "factorization"], rows))
        print("routes agree" if agree else "ROUTES DISAGREE")
    if not agree:
        diff = ", ".join(f"{r.route}={r.e}" for r in reports)
        print(f"error: routes disagree for {d.render()}: {diff}", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def cmd_verify(args) -> int:
    max_rank = args.max_rank if args.max_rank is not None else 8
    if max_rank < 1:
        print("error: --max-rank must be >= 1", file=sys.stderr)
        return EXIT_PARSE
    rows = []
    ok = True
    for d in connected_types(max_rank):
        try:
            e, rhs, w = counting.verify_uniform_formula(d)
            passed = True
        except counting.UniformFormulaError:
            e, rhs, w = counting.e_closed(d), math.factorial(d.rank) * coxeter_number(d) ** d.rank, weyl_order(d)
            passed = False
        ok &= passed
        rows.append({"type": str(d), "e": e, "n!h^n": rhs, "|W|": w, "pass": passed})
    payload = {
        "max_rank": max_rank,
        "all_pass": ok,
        "rows": [{**r, "e": str(r["e"]), "n!h^n": str(r["n!h^n"]), "|W|": str(r["|W|"])} for r in rows],
    }
    text = render_table(
        ["type", "e", "|W|", "n!h^n", "e*|W| = n!h^n"],
        [[r["type"], fmt(r["e"]), fmt(r["|W|"]), fmt(r["n!h^n"]), "pass" if r["pass"] else "FAIL"] for r in rows],
    )
    _emit(args, payload, text + f"\n{'all pass' if ok else 'FAILURES'} ({len(rows)} types)")
    return EXIT_OK if ok else EXIT_DISAGREE


def cmd_chains(args) -> int:
    d = parse_diagram(args.spec)
    if not d.is_connected():
        print(f"error: chains needs a single connected diagram, got {d.render()!r}", file=sys.stderr)
        return EXIT_PARSE
    c = d.components[0]
    order = None
    if args.order:
        order = [int(x) for x in args.order.split(",")]
    rs = weyl.build_root_system(c)
    t0 = time.perf_counter()
    try:
        n = weyl.count_chain_factorizations(
            rs, order=order, budget=args.budget, memo=args.memo, jobs=args.jobs)
    except weyl.BudgetExhausted as exc:
        if args.json:
            _emit(args, {"spec": str(c), "route": "oracle", "status": "budget exhausted",
                         "budget": exc.budget}, "")
        else:
            print(f"{c}: budget exhausted after {exc.budget} node expansions")
        return EXIT_BUDGET
    ms = (time.perf_counter() - t0) * 1000
    _timing(args, "oracle", ms)
    closed = counting.e_closed(c)
    rep = Report(str(c), n, "oracle", counting.factorize(n), None, ms)
    match = n == closed
    payload = {**rep.to_dict(), "closed": str(closed), "match": match}
    text = f"maximal chains of NC({c}): {fmt(n)}\nclosed form: {fmt(closed)}\n" + (
        "matches" if match else "MISMATCH")
    _emit(args, payload, text)
    return EXIT_OK if match else EXIT_DISAGREE


def _table_sequences(N: int):
    rows = [(n, series.A(n), series.B(n), 2 * series.D(n)) for n in range(N + 1)]
    payload = {"kind": "sequences", "rows": [
        {"n": n, "A": str(a), "B": str(b), "2D": str(d)} for n, a, b, d in rows]}
    text = render_table(["n", "A(n)", "B(n)", "2D(n)"],
                        [[str(n), fmt(a), fmt(b), fmt(d)] for n, a, b, d in rows])
    return payload, text


def _table_e(max_rank: int):
    types = connected_types(max_rank)
    payload = {"kind": "e", "rows": [
        {"type": str(d), "e": str(counting.e_closed(d))} for d in types]}
    text = render_table(["type", "e", "factorization"], [
        [str(d), fmt(counting.e_closed(d)),
         counting.format_factorization(counting.factorize(counting.e_closed(d)))] for d in types])
    return payload, text


def _table_hw(max_rank: int):
    types = connected_types(max_rank)
    payload = {"kind": "h-w", "rows": [
        {"type": str(d), "h": str(coxeter_number(d)), "|W|": str(weyl_order(d))} for d in types]}
    text = render_table(["type", "h", "|W|"], [
        [str(d), str(coxeter_number(d)), fmt(weyl_order(d))] for d in types])
    return payload, text


def _table_breakdown(spec: str):
    d = parse_diagram(spec)
    if not d.is_connected():
        raise DiagramError(f"breakdown needs a connected diagram, got {d.render()!r}")
    bd = counting.e_breakdown(d.components[0])
    payload = {"kind": "breakdown", **bd.to_dict()}
    rows = [[str(r.vertex), str(r.subdiagram), fmt(r.e)] for r in bd.rows]
    text = render_table(["i", "Δ(i)", "e(Δ(i))"], rows)
    text += f"\nh = {bd.h}, e({bd.diagram}) = (h/2)·{fmt(sum(r.e for r in bd.rows))} = {fmt(bd.total)}"
    return payload, text


def cmd_table(args) -> int:
    kind = args.kind
    if kind == "sequences":
        N = args.N if args.N is not None else 10
        payload, text = _table_sequences(N)
    elif kind == "e":
        payload, text = _table_e(args.N or args.max_rank or 8)
    elif kind == "h-w":
        payload, text = _table_hw(args.N or args.max_rank or 8)
    elif kind.startswith("breakdown:"):
        payload, text = _table_breakdown(kind.split(":", 1)[1])
    else:
        print(f"error: unknown table {kind!r} (e, h-w, sequences, breakdown:<type>)", file=sys.stderr)
        return EXIT_PARSE
    _emit(args, payload, text)
    return EXIT_OK


def cmd_series(args) -> int:
    N = args.N
    if N < 0:
        print("error: N must be >= 0", file=sys.stderr)
        return EXIT_PARSE
    report = series.verify_appendix_proposition(N)
    rng = random.Random(args.seed)
    abel = []
    for _ in range(args.abel_samples):
        x = rng.choice([v for v in range(-5, 6) if v != 0])
        y, z, n = rng.randint(-5, 5), rng.randint(-3, 3), rng.randint(0, 8)
        abel.append((x, y, z, n, series.abel_sum(x, y, z, n), (x + y) ** n))
    abel_ok = all(lhs == rhs for *_, lhs, rhs in abel)
    ok = report.ok and abel_ok
    payload = {
        "order": N,
        "identities": [
            {"name": c.name, "ok": c.ok, "first_failure": c.first_failure,
             "coefficients": [str(v) for v in c.lhs]}
            for c in report.checks
        ],
        "abel": {"samples": len(abel), "ok": abel_ok},
        "all_hold": ok,
    }
    lines = []
    for c in report.checks:
        verdict = "holds" if c.ok else f"FAILS at n={c.first_failure}"
        lines.append(f"{c.name}: {verdict} for n <= {N}")
    if N >= 4:
        a = series.seq_A(4)
        for name, other, closed in (("A*A", series.seq_A(4), "2·6^3"),
                                    ("A*B", series.seq_B(4), "5^4"),
                                    ("A*D", series.seq_D(4), "4^4")):
            terms = series.convolution_terms(a, other, 4)
            total = sum(b * f * g for b, f, g in terms)
            lines.append(f"({name})(4) = " + " + ".join(f"{b}·{f}·{g}" for b, f, g in terms)
                         + f" = {closed} = {total}")
    lines.append(f"Abel identity: {'holds' if abel_ok else 'FAILS'} on {len(abel)} random samples")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_DISAGREE


# -- argument parsing -------------------------------------------------------

def _budget(value: str):
    if value in weyl.BUDGETS:
        return value
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"budget must be low, high or a positive integer, got {value!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("budget must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-rank", type=int, default=None)
    common.add_argument("--timing", action="store_true", help="print timings to stderr")

    oracle = argparse.ArgumentParser(add_help=False)
    oracle.add_argument("--budget", type=_budget, default="low",
                        help="node-expansion limit for the oracle: low, high or an integer")
    oracle.add_argument("--memo", action="store_true", help="cache subtree counts in the oracle")
    oracle.add_argument("--jobs", type=int, default=1, help="worker processes for the oracle")

    p = argparse.ArgumentParser(prog="dynkin-count", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", parents=[common, oracle], help="e(Δ) by one or more routes")
    c.add_argument("spec")
    c.add_argument("--routes", default="closed", help="comma list of closed, recursive, oracle")
    c.set_defaults(func=cmd_count)

    v = sub.add_parser("verify", parents=[common], help="check e·|W| = n!·h^n")
    v.set_defaults(func=cmd_verify)

    ch = sub.add_parser("chains", parents=[common, oracle], help="oracle chain count vs closed form")
    ch.add_argument("spec")
    ch.add_argument("--order", default=None, help="simple-reflection order, e.g. 2,1,3")
    ch.set_defaults(func=cmd_chains)

    t = sub.add_parser("table", parents=[common], help="print a table")
    t.add_argument("kind", help="e, h-w, sequences or breakdown:<type>")
    t.add_argument("N", nargs="?", type=int, default=None)
    t.set_defaults(func=cmd_table)

    s = sub.add_parser("series", parents=[common], help="verify the convolution identities")
    s.add_argument("N", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--abel-samples", type=int, default=200)
    s.set_defaults(func=cmd_series)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DiagramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except weyl.BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
