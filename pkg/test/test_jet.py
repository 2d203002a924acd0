import math

import numpy
import pytest
from hypothesis import given, settings, strategies as st

from helper_functions import central_difference
from spraycheck.error_handling import DomainError, EvaluationError
from spraycheck.jet import taylor
from spraycheck.jet.field import (
    MAX_ORDER,
    Evaluator,
    LinearCombination,
    eval_jet,
    parse_field,
    x,
    y,
)


def test_monomials_are_prefixes():
    low = taylor.monomials(3, 2)
    high = taylor.monomials(3, 3)
    assert high[: len(low)] == low
    assert len(high) == taylor.size(3, 3) == 20


def test_position_ignores_permutation():
    assert taylor.position(2, (1, 0)) == taylor.position(2, (0, 1)) == 4


def test_exp_series():
    u = taylor.variable(1, 3, numpy.array([[0.0]]), 0)
    coefficients = taylor.apply("exp", u).coefficients[:, 0]
    assert coefficients == pytest.approx([1.0, 1.0, 0.5, 1 / 6])


def test_taylor_partial():
    points = numpy.array([[1.0], [2.0]])
    t0 = taylor.variable(2, 3, points, 0)
    t1 = taylor.variable(2, 3, points, 1)
    u = taylor.mul(taylor.mul(t0, t0), t1)
    du = taylor.partial(u, (0,), 2)
    assert du.order == 2
    # ∂(x0² x1)/∂x0 = 2 x0 x1, and its own x0-derivative is 2 x1
    assert du.value[0] == pytest.approx(4.0)
    assert du.coefficients[taylor.position(2, (0,)), 0] == pytest.approx(4.0)


def test_taylor_partial_needs_order():
    u = taylor.variable(1, 1, numpy.array([[1.0]]), 0)
    with pytest.raises(ValueError):
        taylor.partial(u, (0,), 1)


def test_negative_power():
    u = taylor.variable(1, 2, numpy.array([[2.0]]), 0)
    # x^-2 around 2: 1/4 − (1/4)(x−2) + (3/16)(x−2)²
    assert taylor.power(u, -2).coefficients[:, 0] == pytest.approx([0.25, -0.25, 0.1875])


def test_polynomial_jet():
    jet = eval_jet(parse_field("x1^3*y1", 1, 1), [2.0], [3.0], 3)
    assert jet.value == pytest.approx(24.0)
    assert jet.partial("x1") == pytest.approx(36.0)
    assert jet.partial("x1", "x1") == pytest.approx(36.0)
    assert jet.partial("x1", "y1") == pytest.approx(12.0)
    assert jet.partial("y1", "x1") == pytest.approx(12.0)
    assert jet.partial("x1", "x1", "x1") == pytest.approx(18.0)
    assert jet.partial("x1", "x1", "y1") == pytest.approx(12.0)
    assert jet.partial("y1", "y1") == 0.0


def test_transcendental_jet():
    jet = eval_jet(parse_field("sin(x1*y1)", 1, 1), [0.5], [2.0], 2)
    assert jet.value == pytest.approx(math.sin(1.0))
    assert jet.partial("x1") == pytest.approx(2.0 * math.cos(1.0))
    assert jet.partial("x1", "y1") == pytest.approx(
        math.cos(1.0) - 0.5 * 2.0 * math.sin(1.0)
    )


def test_tan_and_sqrt():
    jet = eval_jet(parse_field("tan(x1) + sqrt(x1)", 1, 0), [0.25], [], 1)
    assert jet.value == pytest.approx(math.tan(0.25) + 0.5)
    assert jet.partial("x1") == pytest.approx(1 / math.cos(0.25) ** 2 + 1.0)


def test_derivative_nodes_agree_with_jets():
    f = parse_field("x1*exp(y1)/(1 + x2^2)", 2, 1)
    g = f.diff_x(0).diff_y(0)
    at = ([0.3, -0.7], [1.1])
    direct = eval_jet(f, *at, order=2).partial("x1", "y1")
    assert eval_jet(g, *at, order=0).value == pytest.approx(direct)


def test_linear_combinations_differentiate_symbolically():
    arity = (1, 1)
    f = 2.0 * x(arity, 0) + 3.0 * y(arity, 0)
    assert isinstance(f, LinearCombination)
    assert f.diff_x(0).is_zero is False
    assert eval_jet(f.diff_y(0), [0.0], [0.0], 0).value == 3.0


def test_cancellation_and_missing_variables():
    arity = (1, 1)
    u = x(arity, 0)
    assert (u - u).is_zero
    assert parse_field("x1^2", 1, 1).diff_y(0).is_zero
    assert not parse_field("x1*y1", 1, 1).diff_y(0).is_zero


def test_evaluator_values_shape():
    points = numpy.array([[0.0, 1.0, 2.0], [1.0, 1.0, 1.0]])
    fields = [parse_field("x1 + y1", 1, 1), parse_field("x1*y1", 1, 1)]
    values = Evaluator(points).values(fields)
    assert values.shape == (2, 3)
    assert values.tolist() == [[1.0, 2.0, 3.0], [0.0, 1.0, 2.0]]


def test_depends_on_fibre():
    assert not parse_field("sin(x1)*x2", 2, 2).depends_on_fibre()
    assert parse_field("x1*y2", 2, 2).depends_on_fibre()


@pytest.mark.parametrize(
    "text,at",
    [
        ("log(x1)", [-1.0]),
        ("sqrt(x1)", [-0.5]),
        ("1/x1", [0.0]),
    ],
)
def test_domain_errors(text, at):
    with pytest.raises(DomainError):
        eval_jet(parse_field(text, 1, 0), at, [], 1)


def test_overflow():
    with pytest.raises(EvaluationError, match="Overflow"):
        eval_jet(parse_field("exp(exp(x1))", 1, 0), [10.0], [], 0)


def test_bad_requests():
    f = parse_field("x1", 1, 1)
    with pytest.raises(ValueError):
        eval_jet(f, [0.0], [0.0], MAX_ORDER + 1)
    with pytest.raises(ValueError):
        eval_jet(f, [0.0, 1.0], [0.0], 1)
    with pytest.raises(EvaluationError):
        eval_jet(f, [math.inf], [0.0], 0)


FIELD = parse_field("exp(x1)*cos(y1) + x1^2/(1 + y1^2) + x1*y1^3", 1, 1)


def value_at(point: numpy.ndarray) -> float:
    return eval_jet(FIELD, point[:1], point[1:], 0).value


@settings(max_examples=50, deadline=None)
@given(
    st.floats(min_value=-1.0, max_value=1.0),
    st.floats(min_value=-2.0, max_value=2.0),
)
def test_first_derivatives_match_difference_quotients(x1, y1):
    jet = eval_jet(FIELD, [x1], [y1], 1)
    point = numpy.array([x1, y1])
    for var, name in enumerate(("x1", "y1")):
        assert jet.partial(name) == pytest.approx(
            central_difference(value_at, point, var), rel=1e-6, abs=1e-6
        )


@settings(max_examples=30, deadline=None)
@given(
    st.floats(min_value=-1.0, max_value=1.0),
    st.floats(min_value=-2.0, max_value=2.0),
)
def test_second_derivatives_match_difference_quotients(x1, y1):
    jet = eval_jet(FIELD, [x1], [y1], 2)
    point = numpy.array([x1, y1])

    def d_y(p: numpy.ndarray) -> float:
        return eval_jet(FIELD, p[:1], p[1:], 1).partial("y1")

    assert jet.partial("x1", "y1") == pytest.approx(
        central_difference(d_y, point, 0), rel=1e-5, abs=1e-5
    )


@settings(max_examples=30, deadline=None)
@given(
    st.floats(min_value=-3.0, max_value=3.0),
    st.floats(min_value=-3.0, max_value=3.0),
)
def test_fourth_order_jet_of_sin_and_cos(x1, y1):
    jet = eval_jet(parse_field("sin(x1) + cos(y1)", 1, 1), [x1], [y1], 4)
    assert len(jet.partials) == taylor.size(2, 4)
    for index, value in jet.partials.items():
        if not index:
            expected = math.sin(x1) + math.cos(y1)
        elif set(index) == {0}:
            expected = math.sin(x1 + len(index) * math.pi / 2)
        elif set(index) == {1}:
            expected = math.cos(y1 + len(index) * math.pi / 2)
        else:
            expected = 0.0
        assert value == pytest.approx(expected, abs=1e-12), index


QUOTIENT = parse_field("exp(x1*y1)/(1 + x1^2)", 1, 1)


def five_point(f, point: numpy.ndarray, var: int, h: float = 1e-3) -> float:
    def shifted(k: int) -> float:
        p = numpy.array(point, dtype=float)
        p[var] += k * h
        return f(p)

    return (-shifted(2) + 8 * shifted(1) - 8 * shifted(-1) + shifted(-2)) / (12 * h)


@pytest.mark.parametrize("point", [(0.3, -0.7), (-0.8, 1.1), (0.0, 0.5)])
@pytest.mark.parametrize(
    "third,var",
    [
        (("x1", "x1", "x1"), 0),
        (("x1", "y1", "y1"), 0),
        (("x1", "y1", "y1"), 1),
        (("y1", "y1", "y1"), 1),
    ],
)
def test_fourth_order_quotient_matches_difference_quotients(point, third, var):
    jet = eval_jet(QUOTIENT, point[:1], point[1:], 4)

    def third_partial(p: numpy.ndarray) -> float:
        return eval_jet(QUOTIENT, p[:1], p[1:], 3).partial(*third)

    fourth = jet.partial(*third, "x1" if var == 0 else "y1")
    assert fourth == pytest.approx(
        five_point(third_partial, numpy.array(point), var), rel=1e-6, abs=1e-6
    )
