"""Print the components of a curvature tensor, or jets of the spray, at one point of E.

The point is given as ``--at "x=0.1,0.2;y=1,-0.5"``; with n = 0 the x part
is left out. Tensor components are labelled by their output index first and
then their argument slots, all counted from 1.
"""
import argparse
import typing as t
from pathlib import Path

import numpy
import regex
from tabulate import tabulate

from spraycheck import cli
from spraycheck.error_handling import (
    DomainError,
    EvaluationError,
    ProjectiveDimensionError,
)
from spraycheck.geometry.connection import BerwaldConnection, berwald_from_spray
from spraycheck.geometry.curvature import (
    TENSORS,
    CurvatureSuite,
    affine_curvatures,
    berwald_curvature,
    jacobi_endomorphism,
)
from spraycheck.geometry.derivation import TensorField
from spraycheck.importer.scenario import Scenario, scenario_from_args
from spraycheck.jet.field import MAX_ORDER, Evaluator, ScalarField, eval_jet

AT = regex.compile(
    r"\s*(?:x\s*=\s*(?P<x>[^;]*?)\s*;\s*)?y\s*=\s*(?P<y>[^;]*?)\s*;?\s*"
)
BERWALD_COEFFICIENTS = "Berwald-coeffs"


def parse_point(
    text: str, n: int, m: int
) -> t.Tuple[t.Tuple[float, ...], t.Tuple[float, ...]]:
    """Read ``x=..;y=..`` into coordinate tuples.

    >>> parse_point("x=0.5, 1; y=2,-1", 2, 2)
    ((0.5, 1.0), (2.0, -1.0))
    >>> parse_point("y=1,2,3", 0, 3)
    ((), (1.0, 2.0, 3.0))
    """
    match = AT.fullmatch(text)
    if not match:
        raise ValueError(f"Cannot read the point {text!r}; write it as 'x=..;y=..'")

    def numbers(part: t.Optional[str], count: int, name: str) -> t.Tuple[float, ...]:
        values = tuple(float(v) for v in part.split(",")) if part else ()
        if len(values) != count:
            raise ValueError(f"The point needs {count} {name}-coordinates, not {len(values)}")
        return values

    return numbers(match["x"], n, "x"), numbers(match["y"], m, "y")


def _labelled(name: str, T: TensorField) -> t.List[t.Tuple[str, ScalarField]]:
    rows = []
    for key, field in T.comp.items():
        if T.contravariant:
            label = f"{name}[{key[0] + 1}][{','.join(str(k + 1) for k in key[1:])}]"
        else:
            label = f"{name}[{','.join(str(k + 1) for k in key)}]"
        rows.append((label, field))
    return rows


def tensor_components(
    Bc: BerwaldConnection, name: str, dimension: str = "rank"
) -> t.List[t.Tuple[str, ScalarField]]:
    """Labelled components of a tensor of the curvature suite, or of ℬ."""
    if name == BERWALD_COEFFICIENTS:
        return [
            (f"B[{gamma + 1}][{alpha + 1}]", b)
            for gamma, row in enumerate(Bc.B)
            for alpha, b in enumerate(row)
        ]
    if name in ("K", "R", "H"):
        K = jacobi_endomorphism(Bc)
        R, H = affine_curvatures(K)
        return _labelled(name, {"K": K, "R": R, "H": H}[name])
    if name == "B":
        return _labelled(name, berwald_curvature(Bc))
    return _labelled(name, CurvatureSuite.build(Bc, None, dimension).tensor(name))


def _derivative_label(n: int, index: t.Tuple[int, ...]) -> str:
    if not index:
        return "-"
    return " ".join(f"x{i + 1}" if i < n else f"y{i - n + 1}" for i in index)


def parser():
    parser = cli.parser(
        __package__ + "." + Path(__file__).stem,
        description=__doc__.split("\n\n")[0],
        epilog=__doc__.split("\n\n")[1],
    )
    what = parser.add_mutually_exclusive_group(required=True)
    what.add_argument(
        "--tensor",
        choices=TENSORS + (BERWALD_COEFFICIENTS,),
        help="The tensor whose components to print",
    )
    what.add_argument(
        "--order",
        type=int,
        choices=range(MAX_ORDER + 1),
        metavar="N",
        help=f"Print all partial derivatives of the spray components up to order N (at most {MAX_ORDER})",
    )
    parser.add_argument(
        "--at",
        required=True,
        metavar="POINT",
        help='The point of E, written as "x=x1,..,xn;y=y1,..,ym"',
    )
    parser.add_argument(
        "--projective-dimension",
        choices=("rank", "base"),
        default=None,
        help="Use the rank m or the base dimension n in W0, W, Wstar and D (default: rank)",
    )
    return parser


def evaluate(
    scenario: Scenario, args: argparse.Namespace
) -> t.List[t.Tuple[str, str, float]]:
    x, y = parse_point(args.at, scenario.n, scenario.m)
    A = scenario.structure()
    spray = scenario.spray(A)
    if args.order is not None:
        rows = []
        for alpha, S in enumerate(spray.S):
            jet = eval_jet(S, x, y, args.order)
            for index, value in sorted(jet.partials.items(), key=lambda kv: (len(kv[0]), kv[0])):
                rows.append((f"S[{alpha + 1}]", _derivative_label(scenario.n, index), value))
        return rows
    dimension = args.projective_dimension or scenario.options.projective_dimension
    components = tensor_components(berwald_from_spray(A, spray), args.tensor, dimension)
    evaluator = Evaluator([[v] for v in (*x, *y)])
    values = evaluator.values([field for _, field in components])
    if numpy.any(numpy.isnan(values)):
        raise DomainError(
            f"{args.tensor} is not defined at x={x}, y={y} (a function argument is outside its domain)"
        )
    if not numpy.all(numpy.isfinite(values)):
        raise EvaluationError(f"Overflow evaluating {args.tensor} at x={x}, y={y}")
    return [(label, "-", float(v[0])) for (label, _), v in zip(components, values)]


def main(argv: t.Optional[t.Sequence[str]] = None) -> t.List[t.Tuple[str, str, float]]:
    args = parser().parse_args(argv)
    cli.setup_logging(args)
    scenario = scenario_from_args(args)
    try:
        rows = evaluate(scenario, args)
    except (ProjectiveDimensionError, EvaluationError) as e:
        cli.Exit.INVALID_SCENARIO(str(e))
    except ValueError as e:
        cli.Exit.CLI_ARGUMENT_ERROR(str(e))
    print(
        tabulate(
            rows,
            headers=["Component", "Derivative", "Value"],
            floatfmt=".12g",
        )
    )
    return rows


if __name__ == "__main__":
    main()
