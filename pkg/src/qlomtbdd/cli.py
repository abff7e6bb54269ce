"""Command-line entry point: ``qlomtbdd <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from pathlib import Path

from .checker import ConditionChecker
from .core import FormatError, decode, encode, equivalent, evaluate, export_dot, reduce
from .generator import GenerationError, GenParams, generate
from .learner import InvariantViolation, ProtocolError, QLearner, query_bounds
from .oracles import OracleError, oracles_from_target, with_cache
from .omtbddas import StructureError
from .pipeline import compile_classifier, load_classifier, load_dataset
from .sweep import SweepSpec, cell_means, run_sweep, write_csv


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _load(path: str):
    try:
        return decode(_read(path))
    except FormatError as exc:
        where = f":{exc.line}" if exc.line else ""
        raise FormatError(f"{path}{where}: {exc}") from None


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def cmd_gen(args) -> int:
    p = GenParams(args.n, args.m, args.k, args.seed)
    d = generate(p)
    with _output(args.out) as out:
        out.write(encode(d, comment=p.comment()))
    return 0


def cmd_learn(args) -> int:
    target = _load(args.target)
    mq, eq = oracles_from_target(target)
    if args.cache_mq:
        mq = with_cache(mq)
    hook = None
    if args.check_invariants:
        checker = ConditionChecker(target)

        def hook(learner):
            report = checker.check(learner)
            if not report.ok:
                raise InvariantViolation(report)

    events_fh = open(args.events, "w", encoding="utf-8") if args.events else None
    try:
        sink = (lambda rec: events_fh.write(json.dumps(rec) + "\n")) if events_fh else None
        learner = QLearner(target.m, mq, eq, k_hint=target.k, addedge_suffix=args.addedge_suffix,
                           events=sink, invariant_hook=hook)
        d = learner.run()
    finally:
        if events_fh:
            events_fh.close()
    if not equivalent(d, target).equal:
        raise ProtocolError("learned diagram differs from the target")
    canon = reduce(target)
    line = f"nodes={len(d)} mq={learner.mq_count} eq={learner.eq_count}"
    if not canon.is_constant:
        mq_bound, eq_bound = query_bounds(len(canon), target.m)
        line += f" mq_bound={mq_bound} eq_bound={eq_bound}"
    if args.cache_mq:
        line += f" mq_distinct={mq.distinct}"
    print(line)
    if args.out:
        with _output(args.out) as out:
            out.write(encode(d))
    return 0


def cmd_sweep(args) -> int:
    grid = [int(x) for x in args.grid.split(",") if x.strip()]
    spec = SweepSpec(args.axis, tuple(grid), args.n, args.m, args.k, args.trials, args.seed, args.timing)
    rows = run_sweep(spec, jobs=args.jobs)
    with _output(args.csv) as out:
        write_csv(rows, out)
    if args.csv and args.csv != "-":
        for value, mq_mean, eq_mean in cell_means(rows):
            print(f"{spec.axis}={value} mean_mq={mq_mean:.1f} mean_eq={eq_mean:.2f}")
    bad = [r for r in rows if not r["within_bounds"]]
    if bad:
        print(f"error: {len(bad)} trial(s) exceeded the query bounds", file=sys.stderr)
        return 1
    return 0


def cmd_compile(args) -> int:
    clf = load_classifier(_read(args.classifier))
    rows = load_dataset(_read(args.data)) if args.data else []
    d, report = compile_classifier(clf, rows, exact=args.exact)
    with _output(args.out) as out:
        out.write(encode(d, comment=f"compiled from {args.classifier}"))
    if args.report:
        with _output(args.report) as out:
            out.write(report.render())
    else:
        sys.stderr.write(report.render())
    return 0


def cmd_eval(args) -> int:
    if args.input.strip("01"):
        raise ValueError(f"input must be a bit string, got {args.input!r}")
    print(evaluate(_load(args.diagram), args.input))
    return 0


def cmd_equiv(args) -> int:
    res = equivalent(_load(args.a), _load(args.b))
    print("YES" if res.equal else f"NO {res.counterexample}")
    return 0


def cmd_reduce(args) -> int:
    with _output(args.out) as out:
        out.write(encode(reduce(_load(args.diagram))))
    return 0


def cmd_dot(args) -> int:
    with _output(args.out) as out:
        out.write(export_dot(_load(args.diagram)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qlomtbdd", description="Query learning of ordered multi-terminal BDDs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random reduced diagram")
    p.add_argument("--n", type=int, required=True, help="node count")
    p.add_argument("--m", type=int, required=True, help="variable count")
    p.add_argument("--k", type=int, required=True, help="sink count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("learn", help="learn a diagram from exact oracles backed by a target file")
    p.add_argument("--target", required=True)
    p.add_argument("--cache-mq", action="store_true", help="memoize membership queries")
    p.add_argument("--check-invariants", action="store_true",
                   help="verify node, tree and edge conditions after every update (slow)")
    p.add_argument("--addedge-suffix", action="store_true",
                   help="recurse with the unconsumed suffix when adding edges")
    p.add_argument("--events", help="write one JSON record per query and update")
    p.add_argument("--out", help="write the learned diagram here")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("sweep", help="query counts over a parameter grid")
    p.add_argument("--axis", required=True, help="n, m or k")
    p.add_argument("--grid", required=True, help="comma-separated values for the axis")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--m", type=int, default=512)
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv")
    p.add_argument("--timing", action="store_true", help="record wall-clock time (makes the CSV nondeterministic)")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: $QLOMTBDD_JOBS or 1)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compile", help="compile a tree classifier into a diagram")
    p.add_argument("--classifier", required=True)
    p.add_argument("--data", help="CSV rows: features then integer label")
    p.add_argument("--out")
    p.add_argument("--report")
    p.add_argument("--exact", action="store_true", help="check against the full truth table instead of the data")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("eval", help="evaluate a diagram at one input")
    p.add_argument("diagram")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("equiv", help="compare two diagrams")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("reduce", help="write the canonical reduced form")
    p.add_argument("diagram")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("dot", help="Graphviz rendering")
    p.add_argument("diagram")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, GenerationError, ProtocolError, OracleError, StructureError,
            InvariantViolation, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
