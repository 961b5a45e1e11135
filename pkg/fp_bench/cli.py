"""
Command line interface

    python -m fp_bench solve INSTANCE [--strategy frac --tiebreak none ...]
    python -m fp_bench batch DIRECTORY --matrix configs/matrix.yaml --output results
    python -m fp_bench aggregate results/runs.jsonl --output results/aggregate.csv
    python -m fp_bench lp INSTANCE --init-tol 1e-6

Exit codes: 0 solution found (or LP optimal), 1 none found, 2 input error.
"""

import argparse
import json
import logging
import math
import sys
import time
from pathlib import Path
from typing import List, Optional

import yaml
from pydantic import ValidationError

from fixprop.config import FolpConfig, HeuristicConfig, InitialLpMethod, Tiebreaker, VariableStrategy
from fixprop.errors import FixPropError
from fixprop.heuristic import FixPropHeuristic
from fixprop.models.instance import lp_relaxation
from fixprop.services.mps import read_mps
from fixprop.services.pdhg import pdhg_solve

from .aggregate import aggregate_file
from .batch_worker import run_batch
from .config import AGGREGATE_FILENAME, DEFAULT_THREADS
from .models import BatchMatrix
from .permute import permute_instance

logger = logging.getLogger(__name__)

EXIT_FOUND = 0
EXIT_NOT_FOUND = 1
EXIT_INPUT_ERROR = 2


def _add_heuristic_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--strategy", choices=[s.value for s in VariableStrategy], default="frac")
    p.add_argument("--tiebreak", choices=[t.value for t in Tiebreaker], default="none")
    p.add_argument("--init-tol", type=float, default=1e-4, help="initial LP relative tolerance")
    p.add_argument("--final-tol", type=float, default=1e-8, help="final LP relative tolerance")
    p.add_argument(
        "--initial-lp",
        choices=[m.value for m in InitialLpMethod],
        default="pdhg",
        help="solver for the initial LP",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-limit", type=float, default=math.inf, help="seconds per run")
    p.add_argument("--backtrack-limit", type=float, default=1000)
    p.add_argument("--no-timings", action="store_true", help="zero all timings for byte-identical reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fp_bench", description="LP-guided fix-and-propagate heuristic")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run the heuristic on one instance")
    solve.add_argument("instance", type=Path)
    _add_heuristic_flags(solve)
    solve.add_argument("--permutation", type=int, default=0, help="permutation seed, 0 keeps the file order")
    solve.add_argument("--reference", type=float, default=None, help="known optimum for the gap")
    solve.add_argument("--output", type=Path, default=None, help="report file, stdout when omitted")

    batch = sub.add_parser("batch", help="run a config matrix over a directory of instances")
    batch.add_argument("directory", type=Path)
    batch.add_argument("--matrix", type=Path, default=None, help="YAML config matrix")
    _add_heuristic_flags(batch)
    batch.add_argument("--permutations", type=int, default=1, help="permutation count when no matrix is given")
    batch.add_argument("--threads", type=int, default=DEFAULT_THREADS)
    batch.add_argument("--output", type=Path, default=Path("results"), help="output directory")

    aggregate = sub.add_parser("aggregate", help="aggregate a JSON-lines report file")
    aggregate.add_argument("reports", type=Path)
    aggregate.add_argument("--output", type=Path, default=None, help=f"CSV path, default {AGGREGATE_FILENAME}")

    lp = sub.add_parser("lp", help="solve the LP relaxation only")
    lp.add_argument("instance", type=Path)
    lp.add_argument("--init-tol", type=float, default=1e-4, help="relative tolerance")
    lp.add_argument("--time-limit", type=float, default=math.inf)
    lp.add_argument("--max-iterations", type=int, default=100_000)
    lp.add_argument("--output", type=Path, default=None)
    return parser


def _heuristic_config(args: argparse.Namespace) -> HeuristicConfig:
    return HeuristicConfig(
        strategy=args.strategy,
        tiebreaker=args.tiebreak,
        initial_tolerance=args.init_tol,
        final_tolerance=args.final_tol,
        initial_lp_method=args.initial_lp,
        seed=args.seed,
        time_limit=args.time_limit,
        backtrack_limit=args.backtrack_limit,
    )


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text + "\n")
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text + "\n", encoding="utf-8")


def _cmd_solve(args: argparse.Namespace) -> int:
    config = _heuristic_config(args)
    t0 = time.perf_counter()
    instance = read_mps(args.instance)
    reading_time = time.perf_counter() - t0
    instance = permute_instance(instance, args.permutation)

    report = FixPropHeuristic(config).run(
        instance, reference=args.reference, reading_time=reading_time, permutation=args.permutation
    )
    _emit(report.to_json(include_timings=not args.no_timings), args.output)
    return EXIT_FOUND if report.found else EXIT_NOT_FOUND


def _cmd_batch(args: argparse.Namespace) -> int:
    if args.matrix is not None:
        matrix = BatchMatrix.from_yaml(args.matrix)
    else:
        matrix = BatchMatrix(
            strategy=args.strategy,
            tiebreak=args.tiebreak,
            init_tol=args.init_tol,
            final_tol=args.final_tol,
            initial_lp_method=args.initial_lp,
            seeds=args.seed,
            permutations=args.permutations,
            time_limit=args.time_limit,
            backtrack_limit=args.backtrack_limit,
        )
    stats = run_batch(
        args.directory, matrix, threads=args.threads, output_dir=args.output, include_timings=not args.no_timings
    )
    print(f"Reports:   {stats['report_path']}")
    print(f"Aggregate: {stats['aggregate_path']}")
    print(f"Found {stats['found']}/{stats['total']}")
    return EXIT_FOUND if stats["found"] > 0 else EXIT_NOT_FOUND


def _cmd_aggregate(args: argparse.Namespace) -> int:
    output = args.output or args.reports.with_name(AGGREGATE_FILENAME)
    rows = aggregate_file(args.reports, output)
    print(f"Wrote {len(rows)} rows to {output}")
    return EXIT_FOUND


def _cmd_lp(args: argparse.Namespace) -> int:
    instance = read_mps(args.instance)
    config = FolpConfig(
        tolerance=args.init_tol,
        time_limit=args.time_limit,
        max_iterations=args.max_iterations,
        verbose=args.verbose,
    )
    lp = pdhg_solve(lp_relaxation(instance), config)
    summary = {"instance": instance.name, **lp.summary()}
    summary["objective"] = instance.report_objective(lp.primal_objective)
    _emit(json.dumps(summary), args.output)
    return EXIT_FOUND if lp.is_optimal else EXIT_NOT_FOUND


COMMANDS = {
    "solve": _cmd_solve,
    "batch": _cmd_batch,
    "aggregate": _cmd_aggregate,
    "lp": _cmd_lp,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="[%(levelname)s] %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (FixPropError, ValidationError, yaml.YAMLError, OSError, EOFError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_INPUT_ERROR
