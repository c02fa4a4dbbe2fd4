"""Command-line front end: ``relation``, ``verify`` and ``expand``.

Exit codes: 0 success, 1 verification failure, 2 step budget exhausted,
64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Iterable, List, Optional

from .builders import RelationReport, remark1_relation, remark3_relation, theorem_rhs
from .cache import Cache
from .expander import BudgetExceeded, ExpansionReport, analyze, expand_full
from .localization import replay_derivation, verify_cprime
from .serialize import (
    class_to_json,
    class_to_latex,
    class_to_text,
    dumps,
    relation_latex,
    relation_text,
    report_from_json,
    report_to_json,
)

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 64

SUITES = ("cprime", "replay", "remark1", "remark3", "all")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _genus(g: int) -> int:
    if g < 1:
        raise UsageError(f"genus must be >= 1, got {g}")
    return g


# -- relation -----------------------------------------------------------------


def cmd_relation(args, cache: Cache) -> int:
    g = _genus(args.genus)
    key = cache.key("relation", g, args.format)
    text = cache.get(key)
    if text is None:
        rhs = theorem_rhs(g)
        if args.format == "json":
            text = dumps(class_to_json(rhs))
        elif args.format == "latex":
            text = (relation_latex(g, rhs) if args.equation else class_to_latex(rhs)) + "\n"
        else:
            text = (relation_text(g, rhs) if args.equation else class_to_text(rhs)) + "\n"
        cache.put(key, text)
    _emit(text, args.output)
    return EXIT_OK


# -- verify -------------------------------------------------------------------


def _suite_reports(suite: str, gmax: int, jmax: int) -> Iterable[RelationReport]:
    if suite == "cprime":
        for g in range(1, gmax + 1):
            for h in range(1, g + 1):
                yield verify_cprime(g, h)
    elif suite == "replay":
        for g in range(1, gmax + 1):
            yield replay_derivation(g)
    elif suite == "remark1":
        for g in range(1, gmax + 1):
            for j in range(1, jmax + 1):
                yield remark1_relation(g, j)
    elif suite == "remark3":
        for g in range(2, gmax + 1):
            yield remark3_relation(g)


def cmd_verify(args, cache: Cache) -> int:
    if args.gmax < 1 or args.jmax < 1:
        raise UsageError("--gmax and --jmax must be >= 1")
    suites = SUITES[:-1] if args.suite == "all" else (args.suite,)
    failed = False
    docs = []
    for suite in suites:
        for rep in _suite_reports(suite, args.gmax, args.jmax):
            docs.append(report_to_json(rep))
            status = "ok" if rep.ok else ("FAIL" if rep.hard else "report-only")
            line = f"{suite} g={rep.genus} {rep.variant}: {status}"
            if suite == "replay" and rep.intermediates:
                line += f" dilaton={rep.intermediates.get('dilaton')} killed_by_psi3={rep.intermediates.get('killed_by_psi3')}"
            print(line)
            if rep.hard and not rep.ok:
                failed = True
                for m in rep.mismatches:
                    print(f"  mismatch: {m}")
                res = rep.residual
                print(f"  residual: {class_to_text(res) if hasattr(res, 'ambient') else res}")
    if args.report:
        Path(args.report).write_text(dumps({"reports": docs}), encoding="utf-8")
    return EXIT_FAIL if failed else EXIT_OK


# -- expand -------------------------------------------------------------------


def _render_expansion(rep: ExpansionReport, fmt: str) -> str:
    if fmt == "json":
        return dumps(report_to_json(rep))
    summary = analyze(rep)
    body = class_to_latex(rep.normal_form) if fmt == "latex" else class_to_text(rep.normal_form)
    lines = [
        f"genus {rep.genus}: {summary['integrality']['terms']} term(s) after {rep.steps} step(s)",
        f"marked point on genus 0 everywhere: {summary['all_marked_on_genus0']}",
        f"all decorations terminal: {summary['all_terminal']}",
        "integrality: " + ", ".join(f"{k}={v}" for k, v in summary["integrality"].items()),
        body,
    ]
    return "\n".join(lines) + "\n"


def cmd_expand(args, cache: Cache) -> int:
    g = _genus(args.genus)
    if args.max_steps < 1:
        raise UsageError("--max-steps must be >= 1")
    variant = f"depth={args.depth}"
    key = cache.key("expand", g, variant)
    payload = cache.get(key)
    if payload is None:
        try:
            rep = expand_full(g, max_steps=args.max_steps, depth=args.depth)
        except BudgetExceeded as exc:
            partial = ExpansionReport(g, exc.partial, exc.steps)
            analyze(partial)
            cache.put(cache.key("expand-partial", g, variant), dumps(report_to_json(partial)))
            if args.output:
                Path(args.output).write_text(dumps(report_to_json(partial)), encoding="utf-8")
            print(f"step budget exhausted after {exc.steps} steps", file=sys.stderr)
            return EXIT_BUDGET
        payload = dumps(report_to_json(rep))
        cache.put(key, payload)
    rep = report_from_json(json.loads(payload))
    _emit(_render_expansion(rep, args.format), args.output)
    return EXIT_OK


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mumford-rec", description="Boundary formula for the Mumford-type class.")
    p.add_argument("--cache-dir", help="cache directory (overrides $MUMFORD_REC_CACHE)")
    p.add_argument("--no-cache", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    r = sub.add_parser("relation", help="print the boundary expression for genus g")
    r.add_argument("--genus", type=int, required=True)
    r.add_argument("--format", choices=("text", "latex", "json"), default="text")
    r.add_argument("--equation", action="store_true", help="prefix the left-hand side")
    r.add_argument("--output")
    r.set_defaults(func=cmd_relation)

    v = sub.add_parser("verify", help="run a verification sweep")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--gmax", type=int, default=6)
    v.add_argument("--jmax", type=int, default=3)
    v.add_argument("--report")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("expand", help="recursively expand to a normal form")
    e.add_argument("--genus", type=int, required=True)
    e.add_argument("--max-steps", type=int, default=10**6)
    e.add_argument("--depth", type=int, default=None)
    e.add_argument("--format", choices=("text", "latex", "json"), default="text")
    e.add_argument("--output")
    e.set_defaults(func=cmd_expand)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cache = Cache(None if args.no_cache else args.cache_dir)
    if args.no_cache:
        cache.root = None
    try:
        return args.func(args, cache)
    except UsageError as exc:
        print(f"mumford-rec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
