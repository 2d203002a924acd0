"""Check a scenario: structure equations, the spray, bracket tables, symmetries and curvature collineations.

The exit status is 0 when every verdict passes, 1 when a check fails or
stays inconclusive, and 2 for unusable arguments or scenario files.
"""
import argparse
import sys
import typing as t
from pathlib import Path

from spraycheck import cli
from spraycheck.error_handling import SpraycheckError
from spraycheck.exporter.report import FORMATS, write
from spraycheck.importer.scenario import scenario_from_args
from spraycheck.report.checks import Report, RunOptions, run_checks


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"needs a positive integer, not {value}")
    return value


def positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"needs a positive number, not {value}")
    return value


def add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--points",
        type=positive_int,
        default=None,
        metavar="N",
        help="Sample N points of E instead of the scenario's count (default: 100)",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        metavar="K",
        help="Seed of the point sampler (default: the scenario's seed, or 42)",
    )
    parser.add_argument(
        "--tol",
        type=positive_float,
        default=None,
        metavar="T",
        help="Absolute tolerance on residual components (default: 1e-8, or 1e-6 for scenarios using functions like sin)",
    )
    parser.add_argument(
        "--projective-dimension",
        choices=("rank", "base"),
        default=None,
        help="Use the rank m or the base dimension n in the projective and Douglas tensors (default: rank)",
    )


def parser():
    parser = cli.parser(
        __package__ + "." + Path(__file__).stem,
        description=__doc__.split("\n\n")[0],
        epilog=__doc__.split("\n\n")[1],
    )
    add_run_options(parser)
    parser.add_argument(
        "--format",
        choices=FORMATS,
        default="text",
        help="Write the report as an aligned table or as JSON (default: text)",
    )
    parser.add_argument(
        "--timing",
        action="store_true",
        default=False,
        help="Include the wall time in JSON reports, which then differ between runs",
    )
    parser.add_argument(
        "--output-file",
        "-o",
        type=argparse.FileType("w"),
        default=sys.stdout,
        help="Write the report to OUTPUT_FILE instead of standard output",
    )
    return parser


def options_from_args(args: argparse.Namespace) -> RunOptions:
    return RunOptions(args.points, args.seed, args.tol, args.projective_dimension)


def main(argv: t.Optional[t.Sequence[str]] = None) -> Report:
    args = parser().parse_args(argv)
    logger = cli.setup_logging(args)
    scenario = scenario_from_args(args)
    try:
        report = run_checks(scenario, options_from_args(args))
    except SpraycheckError as e:
        cli.Exit.INVALID_SCENARIO(f"Cannot check {scenario.name}: {e}")
    print(write(report, args.format, args.timing), file=args.output_file)
    if not report.passed:
        cli.Exit.CHECK_FAILED(
            f"{sum(r.verdict.failing for r in report.results)} checks of {scenario.name} did not pass"
        )
    logger.info(f"{scenario.name}: all checks passed")
    return report


if __name__ == "__main__":
    main()
