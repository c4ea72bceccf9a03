"""Command-line entry point: ``groupoidlab <verb> [options]``."""

from __future__ import annotations

import argparse
import sys

from .corpus import data_path
from .errors import ParseError
from .suite import VERBS, SuiteConfig, emit_report, exit_status, run_checks


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="groupoidlab",
                                description="Exact verification suite for finite groupoid "
                                            "algebras, their Cartan pairs and cocycle gradings.")
    p.add_argument("verb", choices=sorted(VERBS), help="check group to run")
    p.add_argument("--instance", action="append", default=[], metavar="SPEC",
                   help="table file or constructor term (expr:pair(3)); repeatable. "
                        "Default: the shipped corpus")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=25, help="random trials per check and instance")
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--format", dest="output_format", choices=("text", "json-lines"),
                   default="text")
    p.add_argument("--budget-lattice", type=int, default=10_000,
                   help="maximum subgroupoids visited by the closure-lattice search")
    p.add_argument("--budget-subset-bits", type=int, default=12,
                   help="groupoids with at most this many arrows get exhaustive subset checks")
    p.add_argument("--no-timing", action="store_true",
                   help="report elapsed_ms as 0 so output is byte-identical across runs")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    instances = list(args.instance)
    if args.verb == "counterexample" and not instances:
        instances = [data_path("remark.txt")]
    try:
        cfg = SuiteConfig(instances=instances, seed=args.seed, trials=args.trials,
                          tolerance=args.tolerance, budget_lattice=args.budget_lattice,
                          budget_subset_bits=args.budget_subset_bits,
                          output_format=args.output_format, timing=not args.no_timing)
    except ValueError as exc:
        print(f"groupoidlab: error: {exc}", file=sys.stderr)
        return 2
    try:
        reports = run_checks(VERBS[args.verb], cfg)
    except ParseError as exc:
        print(f"groupoidlab: parse error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(emit_report(reports, cfg.output_format))
    return exit_status(reports)


if __name__ == "__main__":
    sys.exit(main())
