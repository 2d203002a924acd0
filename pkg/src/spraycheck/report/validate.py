"""Parse a scenario and check the structure equations of its algebroid.

Nothing else is computed. The exit status is 0 for a valid scenario whose
anchor and structure functions satisfy both structure equations, 1 when
they do not, and 2 when the file cannot be read or parsed.
"""
import typing as t
from pathlib import Path

from tabulate import tabulate

from spraycheck import cli
from spraycheck.error_handling import POLICIES
from spraycheck.geometry.algebroid import StructureReport, check_structure_equations
from spraycheck.importer.scenario import scenario_from_args
from spraycheck.report.check import positive_float, positive_int


def parser():
    parser = cli.parser(
        __package__ + "." + Path(__file__).stem,
        description=__doc__.split("\n\n")[0],
        epilog=__doc__.split("\n\n")[1],
    )
    parser.add_argument("--points", type=positive_int, default=None, metavar="N")
    parser.add_argument("--seed", type=int, default=None, metavar="K")
    parser.add_argument("--tol", type=positive_float, default=None, metavar="T")
    return parser


def main(argv: t.Optional[t.Sequence[str]] = None) -> StructureReport:
    args = parser().parse_args(argv)
    logger = cli.setup_logging(args)
    scenario = scenario_from_args(args)
    structure = scenario.structure()
    points = scenario.points(args.points, args.seed)
    tol = scenario.default_tol if args.tol is None else args.tol
    report = check_structure_equations(structure, points, tol, POLICIES["ignore"])
    print(
        tabulate(
            [
                ("anchor equation", report.anchor.maximum, report.anchor.evaluated),
                ("Jacobi identity", report.jacobi.maximum, report.jacobi.evaluated),
            ],
            headers=["Structure equation", "Max residual", "Points"],
            floatfmt=".3g",
        )
    )
    logger.info(
        f"{scenario.name}: n={scenario.n}, m={scenario.m}, {len(scenario.sections)} sections, {len(scenario.checks)} checks"
    )
    if not report.passed:
        cli.Exit.CHECK_FAILED(
            f"The algebroid of {scenario.name} violates its structure equations"
        )
    return report


if __name__ == "__main__":
    main()
