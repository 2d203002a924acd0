"""Expression language, scalar fields and their exact jets."""
from spraycheck.jet.expression import Expr, parse
from spraycheck.jet.field import (
    Evaluator,
    Jet,
    ScalarField,
    constant,
    eval_jet,
    parse_field,
    total,
    x,
    y,
)

__all__ = [
    "Expr",
    "parse",
    "Evaluator",
    "Jet",
    "ScalarField",
    "constant",
    "eval_jet",
    "parse_field",
    "total",
    "x",
    "y",
]
