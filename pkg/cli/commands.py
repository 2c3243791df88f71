"""
Command-line front end for HRCP-Incremental.

Subcommands:
    gen      generate a synthetic instance
    solve    solve an instance exactly (direct or incremental)
    export   write the compact model in LP format
    bench    run a benchmark grid
    plot     render a 2-D instance (and solution) as SVG
    metrics  dump the sampling metrics of an instance

Exit status is 0 on success, 2 for usage and input errors and 1 for any
other failure.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from bench.harness import DIRECT_METHOD, METHODS, BenchSpec, run_bench, write_results
from bench.report import write_report
from generator.instance_gen import GenParams, generate
from incremental.outer_loop import IncrementalConfig, run
from model.errors import ParameterError
from model.status import RunStatus, SamplingMetric, SolveLimits, relative_gap
from plotting.svg_plot import plot_svg
from sampling.metrics import MetricParams, compute_metrics
from solver.branch_and_bound import solve
from solver.lp_export import export_compact_model
from utils.instance_io import (
    read_instance,
    read_solution,
    solution_to_dict,
    write_instance,
    write_labels,
    write_solution
)


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

LOG_FORMAT = "[%(asctime)s][%(levelname)s][%(name)s] %(message)s"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

METRIC_OPTIONS = ("delta", "alpha", "beta", "k", "random_fraction", "seed")
INCREMENTAL_OPTIONS = METRIC_OPTIONS + ("iter_time_limit",)


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with every subcommand."""
    parser = argparse.ArgumentParser(
        prog="hrcp",
        description="Exact hyper-rectangular clustering with incremental sampling",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="log progress to stderr (-vv for debug output)")
    parser.add_argument("--log-level", choices=LOG_LEVELS, help="explicit log level (overrides -v)")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic instance")
    gen.add_argument("--d", type=int, required=True, help="dimension")
    gen.add_argument("--n", type=int, required=True, help="number of points")
    gen.add_argument("--p", type=int, required=True, help="number of originating points")
    gen.add_argument("--s", type=float, required=True, help="dispersion in [0, 1]")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--output", help="instance file (stdout when omitted)")
    gen.add_argument("--labels", help="also write ground-truth labels to this file")

    solve_cmd = sub.add_parser("solve", help="solve an instance exactly")
    solve_cmd.add_argument("instance")
    solve_cmd.add_argument("--method", choices=METHODS, default=DIRECT_METHOD)
    solve_cmd.add_argument("--p", type=_positive_int, required=True)
    solve_cmd.add_argument("--delta", type=_positive_float, help="neighbourhood radius")
    solve_cmd.add_argument("--alpha", type=float, help=f"initial sample factor (default {MetricParams.alpha})")
    solve_cmd.add_argument("--beta", type=float, help=f"metric threshold (default {MetricParams.beta})")
    solve_cmd.add_argument("--k", type=_positive_int, help="points added per iteration")
    solve_cmd.add_argument("--random-fraction", type=float,
                           help=f"inclusion probability of the rs baseline (default {MetricParams.random_fraction})")
    solve_cmd.add_argument("--seed", type=int, help=f"seed of the rs baseline (default {MetricParams.seed})")
    solve_cmd.add_argument("--time-limit", type=_positive_float, help="global budget in seconds")
    solve_cmd.add_argument("--iter-time-limit", type=_positive_float,
                           help="budget per subproblem in seconds")
    solve_cmd.add_argument("-o", "--output", help="write the solution JSON here")
    solve_cmd.add_argument("--trace", help="write the per-iteration trace CSV here")

    export = sub.add_parser("export", help="write the compact model in LP format")
    export.add_argument("instance")
    export.add_argument("--p", type=_positive_int, required=True)
    export.add_argument("-o", "--output", help="model file (stdout when omitted)")

    bench = sub.add_parser("bench", help="run a benchmark grid")
    bench.add_argument("--spec", required=True, help="bench spec JSON")
    bench.add_argument("-o", "--output", help="result CSV (overrides the spec)")
    bench.add_argument("--report", help="HTML report (overrides the spec)")

    plot = sub.add_parser("plot", help="render a 2-D instance as SVG")
    plot.add_argument("instance")
    plot.add_argument("--solution", help="solution JSON whose boxes are drawn")
    plot.add_argument("-o", "--output", help="SVG file (stdout when omitted)")

    metrics = sub.add_parser("metrics", help="dump sampling metrics as CSV")
    metrics.add_argument("instance")
    metrics.add_argument("--delta", type=_positive_float)
    metrics.add_argument("-o", "--output", help="CSV file (stdout when omitted)")
    return parser


def configure_logging(verbosity: int, level_name: Optional[str] = None):
    if level_name:
        level = getattr(logging, level_name)
    else:
        level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def cmd_gen(args) -> int:
    generated = generate(GenParams(d=args.d, n=args.n, p=args.p, s=args.s, seed=args.seed))
    write_instance(generated.instance, args.output or sys.stdout)
    if args.labels:
        write_labels(generated.labels, args.labels)
    logger.info("generated %s", generated.params.name)
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = read_instance(args.instance)

    if args.method == DIRECT_METHOD:
        if args.trace:
            raise ParameterError("--trace needs an incremental method (nm, em, dm or rs)")
        given = [f"--{name.replace('_', '-')}" for name in INCREMENTAL_OPTIONS if getattr(args, name) is not None]
        if given:
            raise ParameterError(f"{', '.join(given)} only apply to the incremental methods")
        outcome = solve(instance, args.p, SolveLimits(time_limit=args.time_limit))
        if outcome.is_optimal:
            status = RunStatus.OPTIMAL
        elif outcome.clustering is not None:
            status = RunStatus.FEASIBLE
        else:
            status = RunStatus.NO_SOLUTION
        clustering, lb, ub = outcome.clustering, outcome.lower_bound, outcome.upper_bound
        iterations, points_used, elapsed = 1, instance.n, outcome.elapsed
    else:
        params = MetricParams(**{
            name: getattr(args, name) for name in METRIC_OPTIONS if getattr(args, name) is not None
        })
        config = IncrementalConfig(
            p=args.p,
            metric=SamplingMetric.parse(args.method),
            metric_params=params,
            iteration_limits=SolveLimits(time_limit=args.iter_time_limit),
            time_limit=args.time_limit,
        )
        result = run(instance, config)
        if args.trace:
            result.trace.write_csv(args.trace)
        status, clustering = result.status, result.clustering
        lb, ub = result.lower_bound, result.upper_bound
        iterations, points_used, elapsed = result.iterations, result.sample_size, result.elapsed

    if args.output and clustering is not None:
        write_solution(clustering, args.output)

    report = {
        "method": args.method,
        "status": status.value,
        "span": ub,
        "lb": lb,
        "gap": relative_gap(ub, lb),
        "iterations": iterations,
        "points_used": points_used,
        "time_ms": round(1000.0 * elapsed, 3),
        "solution": None if clustering is None else solution_to_dict(clustering),
    }
    # json writes inf as Infinity
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_export(args) -> int:
    instance = read_instance(args.instance)
    text = export_compact_model(instance, args.p, args.output)
    if not args.output:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    spec = BenchSpec.from_json(args.spec)
    frame = run_bench(spec)
    output = args.output or spec.output
    write_results(frame, output if output else sys.stdout)
    report = args.report or spec.report
    if report:
        write_report(frame, report)
    return EXIT_OK


def cmd_plot(args) -> int:
    instance = read_instance(args.instance)
    clustering = read_solution(args.solution) if args.solution else None
    text = plot_svg(instance, clustering, args.output)
    if not args.output:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_metrics(args) -> int:
    instance = read_instance(args.instance)
    table = compute_metrics(instance, args.delta)
    table.write_csv(args.output or sys.stdout)
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "solve": cmd_solve,
    "export": cmd_export,
    "bench": cmd_bench,
    "plot": cmd_plot,
    "metrics": cmd_metrics,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the command line.

    Args:
        argv: Arguments without the program name (sys.argv[1:] when None)

    Returns:
        Process exit status
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    configure_logging(args.verbose, args.log_level)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        # bad parameters, malformed or missing files
        print(f"hrcp {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        logger.debug("unhandled failure", exc_info=True)
        print(f"hrcp {args.command}: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
