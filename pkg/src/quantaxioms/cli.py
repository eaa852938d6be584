"""Command-line entry point: ``quantaxioms <command> ...``."""
from __future__ import annotations

import argparse
import json
import os
import sys

from .axioms import DEFAULT_BUDGET, DEFAULT_TOLERANCE, check_property, property_matrix
from .errors import QuantError
from .evaluation import AGGREGATES, evaluate_samples, ingest_collect
from .measures import TABLE_MEASURES, EvalContext, parse_measure
from .reports import counterexample_tables, plot_grid
from .scenarios import parse_property

SEED_ENV = "QUANTAXIOMS_SEED"
EXIT_USAGE = 2


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "").strip()
    if not raw:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"error: {SEED_ENV} must be an integer, got {raw!r}") from None


def _fail(exc: Exception) -> int:
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_USAGE


def _measure_list(text: str):
    return [parse_measure(name) for name in text.split(",") if name.strip()]


def cmd_eval(args) -> int:
    try:
        measures = _measure_list(args.measures) if args.measures else list(TABLE_MEASURES)
        records, problems = ingest_collect(args.input, args.format)
        if problems:
            for exc in problems:
                print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if args.epsilon is not None:
            ctx = EvalContext.with_epsilon(args.epsilon)
        elif args.sample_size is not None:
            ctx = EvalContext.for_sample_size(args.sample_size)
        else:
            ctx = None
        report = evaluate_samples(records, measures, ctx)
    except (QuantError, OSError) as exc:
        return _fail(exc)
    agg = AGGREGATES if args.agg == "both" else (args.agg,)
    print(report.to_json(agg, indent=2))
    return 0


def cmd_axioms(args) -> int:
    try:
        verdict = check_property(
            parse_measure(args.measure),
            parse_property(args.property),
            args.budget,
            args.seed,
            args.tolerance,
            args.classes,
        )
    except (QuantError, ValueError) as exc:
        return _fail(exc)
    print(verdict.describe())
    print(json.dumps(verdict.to_dict(), indent=2))
    return 0


def cmd_table1(args) -> int:
    try:
        matrix = property_matrix(args.budget, args.seed)
    except ValueError as exc:
        return _fail(exc)
    if args.format in ("text", "both"):
        print(matrix.render())
    if args.format == "both":
        print()
    if args.format in ("json", "both"):
        print(matrix.to_json(indent=2))
    return 0


def cmd_counterexamples(args) -> int:
    tables = counterexample_tables()
    if args.json:
        print(json.dumps([t.to_dict() for t in tables], indent=2))
    else:
        print("\n\n".join(t.render() for t in tables))
    return 0


def cmd_plotgrid(args) -> int:
    try:
        grid = plot_grid(parse_measure(args.measure), args.resolution, args.epsilon)
        grid.write_csv(args.out)
    except (QuantError, ValueError, OSError) as exc:
        return _fail(exc)
    print(f"wrote {len(grid.rows)} rows to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantaxioms",
        description="Score prevalence estimates and probe the axioms of quantification measures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="score true vs predicted prevalences from a file")
    p.add_argument("input", help="CSV or JSON file")
    p.add_argument("--format", choices=("csv", "json"), default=None, help="default: from suffix")
    p.add_argument("--measures", default=None, help="comma list, e.g. ae,kld (default: all nine)")
    smoothing = p.add_mutually_exclusive_group()
    smoothing.add_argument("--epsilon", type=float, default=None, help="fixed smoothing constant")
    smoothing.add_argument("--sample-size", type=int, default=None, help="smooth with 1/(2*N)")
    p.add_argument("--agg", choices=("mean", "median", "both"), default="both")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("axioms", help="try to falsify one property for one measure")
    p.add_argument("--measure", required=True)
    p.add_argument("--property", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--classes", type=int, default=None, help="fix the codeframe size")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("table1", help="property matrix for the nine measures")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    p.add_argument("--format", choices=("text", "json", "both"), default="both")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("counterexamples", help="print the four fixed counterexample tables")
    p.add_argument("--json", action="store_true", help="full precision JSON instead of text")
    p.set_defaults(func=cmd_counterexamples)

    p = sub.add_parser("plotgrid", help="write an x,y,z grid of a measure on two classes")
    p.add_argument("--measure", required=True)
    p.add_argument("--resolution", type=int, default=101)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plotgrid)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", 0) is None:
        args.seed = _default_seed()
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
