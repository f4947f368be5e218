"""Command-line front end.

Exit codes: 0 success, 1 a check came out against expectation (false
formula, unexpected verdict, not a bisimulation), 2 usage, parse or model
errors, 3 an undefined update in naive mode.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .bisim import (format_relation, is_partial_bisimulation, largest_partial_bisimulation,
                    parse_relation)
from .documents import DocumentError, load_model
from .lab.builtins import BUILTINS, builtin_document
from .lab.suites import SuiteError, builtin_suites, load_suite, run_suite
from .model import Evaluator, Mode, Scenario, SemanticsError, SubsetModel, UndefinedUpdate
from .reduction import ReductionError, format_step, reduce
from .syntax import ParseError, parse, render
from .topology import TopologyError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNDEFINED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def resolve_model(ref: str) -> SubsetModel:
    """A built-in model name or a path to a model document."""
    if ref in BUILTINS:
        return builtin_document(ref).to_model()
    path = Path(ref)
    if not path.is_file():
        raise UsageError(f"{ref!r} is neither a built-in model ({', '.join(BUILTINS)}) nor a file")
    return load_model(path)


def _emit(args: argparse.Namespace, text: str, data: object) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


# eval -------------------------------------------------------------------


def cmd_eval(args: argparse.Namespace) -> int:
    m = resolve_model(args.model)
    mode = Mode(args.mode)
    f = parse(args.formula)
    if args.range_worlds:
        u = m.universe.mask(w.strip() for w in args.range_worlds.split(","))
    else:
        u = m.resolve_range(args.range)
    if not m.is_range(u, mode):
        raise UsageError(f"{m.universe.format(u)} is not an epistemic range in {mode.value} mode")
    if args.world == "*":
        worlds = [m.universe.names[i] for i in range(len(m.universe)) if u >> i & 1]
    else:
        m.world_index(args.world)
        if not u >> m.world_index(args.world) & 1:
            raise UsageError(f"world {args.world} is not in range {m.universe.format(u)}")
        worlds = [args.world]
    ev = Evaluator(m, mode)
    rows = []
    for w in worlds:
        try:
            value = ev.holds(m.world_index(w), u, f)
        except UndefinedUpdate as exc:
            print(f"({w}, {m.range_name(u)}): undefined: {exc}", file=sys.stderr)
            print(f"  offending announcement: {render(exc.announced, sugar=True)}", file=sys.stderr)
            print(f"  at range: {m.universe.format(exc.range)}", file=sys.stderr)
            return EXIT_UNDEFINED
        rows.append((Scenario(w, u), value))
    text = "".join(f"({s.world}, {m.range_name(s.range)}) {render(f, sugar=True)}: "
                   f"{'true' if v else 'false'}\n" for s, v in rows)
    data = {"formula": render(f), "mode": mode.value,
            "results": [{"world": s.world, "range": m.universe.members(s.range), "value": v} for s, v in rows]}
    _emit(args, text, data)
    return EXIT_OK if all(v for _, v in rows) else EXIT_FAIL


# reduce -----------------------------------------------------------------


def cmd_reduce(args: argparse.Namespace) -> int:
    f = parse(args.formula)
    trace = reduce(f)
    lines = []
    if args.trace:
        lines += [format_step(s) for s in trace.steps]
    lines.append(render(trace.output, sugar=True))
    data = {"input": render(f), "output": render(trace.output), "output_sugared": render(trace.output, sugar=True),
            "steps": [{"scheme": s.scheme, "position": list(s.position), "after": render(s.after)}
                      for s in trace.steps]}
    _emit(args, "\n".join(lines), data)
    return EXIT_OK


# check ------------------------------------------------------------------


def cmd_check(args: argparse.Namespace) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    suite = load_suite(args.suite).with_overrides(args.max_worlds, args.seed, args.trials)
    report = run_suite(suite, jobs=args.jobs, save_dir=args.save_counterexamples)
    _emit(args, report.to_text(), report.to_json())
    return EXIT_OK if report.ok else EXIT_FAIL


# bisim ------------------------------------------------------------------


def cmd_bisim(args: argparse.Namespace) -> int:
    a, b = resolve_model(args.model_a), resolve_model(args.model_b)
    mode = Mode(args.mode)
    if args.relation == "LARGEST":
        r = largest_partial_bisimulation(a, b, mode=mode)
        data = [[s.world, a.universe.members(s.range), t.world, b.universe.members(t.range)]
                for s, t in r.sorted_pairs()]
        _emit(args, format_relation(r), {"pairs": data})
        return EXIT_OK
    path = Path(args.relation)
    if not path.is_file():
        raise UsageError(f"relation file {args.relation!r} not found")
    r = parse_relation(path.read_text(encoding="utf-8"), a, b)
    verdict = is_partial_bisimulation(a, b, r, mode=mode)
    if verdict.ok:
        _emit(args, f"partial bisimulation ({len(r)} pairs)", {"ok": True, "pairs": len(r)})
        return EXIT_OK
    s, t = verdict.pair
    pair = f"{s.world},{a.range_name(s.range)} ~ {t.world},{b.range_name(t.range)}"
    _emit(args, f"not a partial bisimulation: {verdict.condition} fails at {pair}: {verdict.detail}",
          {"ok": False, "condition": verdict.condition, "pair": pair, "detail": verdict.detail})
    return EXIT_FAIL


# examples ---------------------------------------------------------------


def cmd_examples(args: argparse.Namespace) -> int:
    if args.name in ("list", "LIST"):
        docs = {n: builtin_document(n) for n in BUILTINS}
        text = "".join(f"{n:<14} {d.meta}\n" for n, d in docs.items())
        _emit(args, text, {n: d.meta for n, d in docs.items()})
        return EXIT_OK
    if args.name not in BUILTINS:
        raise UsageError(f"unknown example {args.name!r}; try 'examples list'")
    params = {}
    if args.name == "target-wall":
        params = {k: v for k, v in (("width", args.width), ("height", args.height), ("cell", args.cell))
                  if v is not None}
    elif any(v is not None for v in (args.width, args.height, args.cell)):
        raise UsageError("--width/--height/--cell only apply to target-wall")
    doc = builtin_document(args.name, **params)
    if args.output:
        Path(args.output).write_text(doc.dumps(), encoding="utf-8")
    else:
        sys.stdout.write(doc.dumps())
    return EXIT_OK


# parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="topopal", description="Topological public announcement logic toolkit.")
    sub = p.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default="text", help="report format")

    e = sub.add_parser("eval", parents=[fmt], help="evaluate a formula at scenarios of a model")
    e.add_argument("model", help="built-in model name or model document path")
    e.add_argument("world", help="world name, or * for every world of the range")
    e.add_argument("range", help="ALL, a family member name, or {w1,w2}")
    e.add_argument("formula")
    e.add_argument("--mode", choices=[m.value for m in Mode], default="int")
    e.add_argument("--range-worlds", metavar="W1,W2", help="explicit range; overrides RANGE")
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("reduce", parents=[fmt], help="rewrite a formula without announcements")
    r.add_argument("formula")
    r.add_argument("--trace", action="store_true", help="print every rewrite step")
    r.set_defaults(func=cmd_reduce)

    c = sub.add_parser("check", parents=[fmt], help="run a validity suite")
    c.add_argument("suite", help=f"built-in suite ({', '.join(builtin_suites())}) or manifest path")
    c.add_argument("--max-worlds", type=int)
    c.add_argument("--seed", type=int)
    c.add_argument("--trials", type=int)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--save-counterexamples", metavar="DIR")
    c.set_defaults(func=cmd_check)

    b = sub.add_parser("bisim", parents=[fmt], help="check or compute a partial bisimulation")
    b.add_argument("model_a")
    b.add_argument("model_b")
    b.add_argument("relation", help="relation file, or LARGEST")
    b.add_argument("--mode", choices=("int", "naive"), default="int")
    b.set_defaults(func=cmd_bisim)

    x = sub.add_parser("examples", parents=[fmt], help="list or emit built-in models")
    x.add_argument("name", help="list, or a built-in model name")
    x.add_argument("-o", "--output")
    x.add_argument("--width", type=int)
    x.add_argument("--height", type=int)
    x.add_argument("--cell", type=int)
    x.set_defaults(func=cmd_examples)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        if exc.text:
            print(f"  {exc.text}\n  {' ' * exc.position}^", file=sys.stderr)
        return EXIT_USAGE
    except UndefinedUpdate as exc:
        print(f"undefined: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except (UsageError, DocumentError, SuiteError, SemanticsError, ReductionError,
            TopologyError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
