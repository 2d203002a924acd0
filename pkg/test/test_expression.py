import math

import pytest

from spraycheck.error_handling import ExpressionSyntaxError
from spraycheck.jet.expression import (
    Binary,
    Call,
    Negate,
    Number,
    Power,
    Variable,
    constant_value,
    parse,
)


def test_precedence():
    expr = parse("x1 + 2*y1^2", 1, 1)
    assert expr == Binary(
        "+", Variable("x", 1), Binary("*", Number(2.0), Power(Variable("y", 1), 2))
    )


def test_unary_minus_binds_looser_than_power():
    assert parse("-y1^2", 0, 1) == Negate(Power(Variable("y", 1), 2))


def test_power_is_right_associative():
    assert constant_value(parse("2^3^2", 0, 0)) == 512.0


def test_negative_exponent():
    assert parse("x1^-2", 1, 0) == Power(Variable("x", 1), -2)


def test_left_associative_subtraction():
    assert constant_value(parse("10 - 3 - 2", 0, 0)) == 5.0
    assert constant_value(parse("12 / 3 / 2", 0, 0)) == 2.0


def test_pi_and_functions():
    assert parse("sin(pi*x1)", 1, 0) == Call(
        "sin", Binary("*", Number(math.pi), Variable("x", 1))
    )
    assert parse("exp(y1) + log(x1)", 1, 1).functions() == {"exp", "log"}


def test_numbers_with_exponent():
    assert constant_value(parse("1.5e-3", 0, 0)) == pytest.approx(0.0015)
    assert constant_value(parse(".5", 0, 0)) == 0.5


@pytest.mark.parametrize(
    "text,offset",
    [
        ("", 0),
        ("x1 +", 4),
        ("x1 $ y1", 3),
        ("(x1", 3),
        ("x3", 0),
        ("y1 + z1", 5),
        ("foo(x1)", 0),
        ("x1^y1", 3),
        ("x1^0.5", 3),
        ("x1 x2", 3),
    ],
)
def test_syntax_error_offset(text, offset):
    with pytest.raises(ExpressionSyntaxError) as err:
        parse(text, 2, 1)
    assert err.value.offset == offset


def test_offset_counts_bytes():
    # The no-break space takes two bytes in UTF-8.
    with pytest.raises(ExpressionSyntaxError) as err:
        parse("x1\u00a0+", 1, 0)
    assert err.value.offset == 5
    with pytest.raises(ExpressionSyntaxError) as err:
        parse("x1 é", 1, 0)
    assert err.value.offset == 3


def test_variable_out_of_range_message():
    with pytest.raises(ExpressionSyntaxError, match="only y1..y2 exist"):
        parse("y1 + y3", 1, 2)


def test_no_base_coordinates():
    with pytest.raises(ExpressionSyntaxError, match="only x1..x0 exist"):
        parse("x1", 0, 3)


@pytest.mark.parametrize(
    "text",
    [
        "y1^2 + x2",
        "-x1^-2*sin(pi*y2) / (1 - y1)",
        "2^3^2 - 4 - 1.5e-05",
        "exp(-(y1^2 + y2^2))*sqrt(x1*x1 + 1)",
    ],
)
def test_printed_form_parses_back(text):
    expr = parse(text, 2, 2)
    assert parse(str(expr), 2, 2) == expr


@pytest.mark.parametrize(
    "text",
    [
        "x1^(1/0)",
        "x1^log(0)",
        "x1^exp(1000)",
        "x1^(0^(-1))",
        "x1^sqrt(-1)",
        "x1^(1e308*10)",
    ],
)
def test_exponent_must_be_finite(text):
    with pytest.raises(ExpressionSyntaxError, match="finite integer constant") as err:
        parse(text, 1, 0)
    assert err.value.offset == 3
