"""Scalar fields on E and their exact evaluation by jets.

A `ScalarField` is a node of an immutable expression graph over the
variables ``x1..xn, y1..ym`` (numbered 0..n+m-1 internally, x first).
Nodes are constants, variables, linear combinations, products, quotients,
integer powers, function applications and partial derivatives. Partial
derivatives are not expanded symbolically: a derivative node asks its
argument for a jet one order higher and reads the shifted coefficients, so
every derivative is exact up to rounding.

>>> f = parse_field("y1^2 + x1*y1", 1, 1)
>>> jet = eval_jet(f, [2.0], [3.0], order=2)
>>> jet.value, jet.partial("y1"), jet.partial("y1", "y1"), jet.partial("x1", "y1")
(15.0, 8.0, 2.0, 1.0)
"""
import typing as t

import attr
import numpy

from spraycheck.error_handling import DomainError, EvaluationError
from spraycheck.jet import expression, taylor
from spraycheck.jet.taylor import MultiIndex, Taylor

MAX_ORDER = 4

Arity = t.Tuple[int, int]
Number = t.Union[int, float]


class ScalarField:
    """A smooth function of (x, y), evaluable with exact partial derivatives."""

    __slots__ = ("arity", "variables", "_partials")

    def __init__(self, arity: Arity, variables: t.FrozenSet[int]):
        self.arity = arity
        self.variables = variables
        self._partials: t.Dict[MultiIndex, "ScalarField"] = {}

    # Structure

    @property
    def nvars(self) -> int:
        return self.arity[0] + self.arity[1]

    def children(self) -> t.Tuple["ScalarField", ...]:
        return ()

    def requirements(self, order: int) -> t.Iterator[t.Tuple["ScalarField", int]]:
        for child in self.children():
            yield child, order

    def evaluate(self, evaluator: "Evaluator", order: int) -> Taylor:
        raise NotImplementedError

    def depends_on_fibre(self) -> bool:
        return any(v >= self.arity[0] for v in self.variables)

    @property
    def is_zero(self) -> bool:
        return False

    # Algebra

    def _lift(self, other: t.Union["ScalarField", Number]) -> "ScalarField":
        if isinstance(other, ScalarField):
            if other.arity != self.arity:
                raise ValueError(
                    f"Cannot combine fields of arity {self.arity} and {other.arity}"
                )
            return other
        return Constant(self.arity, float(other))

    def __add__(self, other):
        return combine([(1.0, self), (1.0, self._lift(other))])

    __radd__ = __add__

    def __sub__(self, other):
        return combine([(1.0, self), (-1.0, self._lift(other))])

    def __rsub__(self, other):
        return combine([(-1.0, self), (1.0, self._lift(other))])

    def __neg__(self):
        return combine([(-1.0, self)])

    def __mul__(self, other):
        return product(self, self._lift(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if isinstance(other, Constant):
            if other.value == 0:
                raise ZeroDivisionError("Division of a field by the constant 0")
            return combine([(1.0 / other.value, self)])
        return Quotient(self, other)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise TypeError("Fields can only be raised to integer powers")
        if exponent == 0:
            return Constant(self.arity, 1.0)
        if exponent == 1:
            return self
        return IntegerPower(self, exponent)

    # Differentiation

    def diff(self, var: int) -> "ScalarField":
        return self.partial((var,))

    def diff_x(self, i: int) -> "ScalarField":
        return self.diff(i)

    def diff_y(self, alpha: int) -> "ScalarField":
        return self.diff(self.arity[0] + alpha)

    def partial(self, multi_index: t.Iterable[int]) -> "ScalarField":
        key = tuple(sorted(multi_index))
        if not key:
            return self
        try:
            return self._partials[key]
        except KeyError:
            pass
        if any(v not in self.variables for v in key):
            result: ScalarField = Constant(self.arity, 0.0)
        else:
            result = self._differentiate(key)
        self._partials[key] = result
        return result

    def _differentiate(self, key: MultiIndex) -> "ScalarField":
        return Partial(self, key)


class Constant(ScalarField):
    __slots__ = ("value",)

    def __init__(self, arity: Arity, value: float):
        super().__init__(arity, frozenset())
        self.value = value

    @property
    def is_zero(self) -> bool:
        return self.value == 0.0

    def evaluate(self, evaluator, order):
        return taylor.constant(self.nvars, order, evaluator.count, self.value)

    def __repr__(self):
        return f"Constant({self.value!r})"


class Coordinate(ScalarField):
    __slots__ = ("index",)

    def __init__(self, arity: Arity, index: int):
        super().__init__(arity, frozenset([index]))
        self.index = index

    def _differentiate(self, key):
        return Constant(self.arity, 1.0 if key == (self.index,) else 0.0)

    def evaluate(self, evaluator, order):
        return taylor.variable(self.nvars, order, evaluator.points, self.index)

    def __repr__(self):
        n = self.arity[0]
        if self.index < n:
            return f"x{self.index + 1}"
        return f"y{self.index - n + 1}"


class LinearCombination(ScalarField):
    __slots__ = ("terms", "factors", "offset")

    def __init__(self, terms, factors, offset: float):
        super().__init__(
            terms[0].arity, frozenset().union(*(term.variables for term in terms))
        )
        self.terms = tuple(terms)
        self.factors = tuple(factors)
        self.offset = offset

    def children(self):
        return self.terms

    def _differentiate(self, key):
        return combine([(f, term.partial(key)) for f, term in zip(self.factors, self.terms)])

    def evaluate(self, evaluator, order):
        return taylor.linear_combination(
            [evaluator.jet(term, order) for term in self.terms], self.factors, self.offset
        )


class Product(ScalarField):
    __slots__ = ("left", "right")

    def __init__(self, left: ScalarField, right: ScalarField):
        super().__init__(left.arity, left.variables | right.variables)
        self.left = left
        self.right = right

    def children(self):
        return (self.left, self.right)

    def evaluate(self, evaluator, order):
        return taylor.mul(evaluator.jet(self.left, order), evaluator.jet(self.right, order))


class Quotient(ScalarField):
    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: ScalarField, denominator: ScalarField):
        super().__init__(numerator.arity, numerator.variables | denominator.variables)
        self.numerator = numerator
        self.denominator = denominator

    def children(self):
        return (self.numerator, self.denominator)

    def evaluate(self, evaluator, order):
        return taylor.mul(
            evaluator.jet(self.numerator, order),
            taylor.apply("reciprocal", evaluator.jet(self.denominator, order)),
        )


class IntegerPower(ScalarField):
    __slots__ = ("base", "exponent")

    def __init__(self, base: ScalarField, exponent: int):
        super().__init__(base.arity, base.variables)
        self.base = base
        self.exponent = exponent

    def children(self):
        return (self.base,)

    def evaluate(self, evaluator, order):
        return taylor.power(evaluator.jet(self.base, order), self.exponent)


class Function(ScalarField):
    __slots__ = ("name", "argument")

    def __init__(self, name: str, argument: ScalarField):
        super().__init__(argument.arity, argument.variables)
        self.name = name
        self.argument = argument

    def children(self):
        return (self.argument,)

    def evaluate(self, evaluator, order):
        return taylor.apply(self.name, evaluator.jet(self.argument, order))


class Partial(ScalarField):
    __slots__ = ("base", "multi_index")

    def __init__(self, base: ScalarField, multi_index: MultiIndex):
        super().__init__(base.arity, base.variables)
        self.base = base
        self.multi_index = multi_index

    def children(self):
        return (self.base,)

    def requirements(self, order):
        yield self.base, order + len(self.multi_index)

    def partial(self, multi_index):
        return self.base.partial(self.multi_index + tuple(multi_index))

    def evaluate(self, evaluator, order):
        source = evaluator.jet(self.base, order + len(self.multi_index))
        return taylor.partial(source, self.multi_index, order)


def combine(
    terms: t.Iterable[t.Tuple[float, ScalarField]], offset: float = 0.0
) -> ScalarField:
    """Build Σ factor·field + offset, folding constants and merging repeats."""
    merged: t.Dict[int, t.List] = {}
    arity = None
    for factor, field in terms:
        arity = field.arity
        if factor == 0.0:
            continue
        if isinstance(field, Constant):
            offset += factor * field.value
        elif isinstance(field, LinearCombination):
            offset += factor * field.offset
            for inner_factor, inner in zip(field.factors, field.terms):
                entry = merged.setdefault(id(inner), [0.0, inner])
                entry[0] += factor * inner_factor
        else:
            entry = merged.setdefault(id(field), [0.0, field])
            entry[0] += factor
    kept = [(f, field) for f, field in merged.values() if f != 0.0]
    if arity is None:
        raise ValueError("Cannot combine an empty list of fields")
    if not kept:
        return Constant(arity, offset)
    if len(kept) == 1 and kept[0][0] == 1.0 and offset == 0.0:
        return kept[0][1]
    return LinearCombination([f for _, f in kept], [c for c, _ in kept], offset)


def product(left: ScalarField, right: ScalarField) -> ScalarField:
    if isinstance(left, Constant) and not isinstance(right, Constant):
        left, right = right, left
    if isinstance(right, Constant):
        if isinstance(left, Constant):
            return Constant(left.arity, left.value * right.value)
        if right.value == 1.0:
            return left
        return combine([(right.value, left)])
    return Product(left, right)


def total(fields: t.Iterable[ScalarField], arity: Arity) -> ScalarField:
    """The sum of many fields, built in one step.

    >>> total([], (1, 1))
    Constant(0.0)
    """
    fields = list(fields)
    if not fields:
        return Constant(arity, 0.0)
    return combine([(1.0, f) for f in fields])


def apply_function(name: str, argument: ScalarField) -> ScalarField:
    if name not in expression.FUNCTIONS:
        raise ValueError(f"Unknown function {name}")
    return Function(name, argument)


def from_expr(expr: expression.Expr, n: int, m: int) -> ScalarField:
    arity = (n, m)
    if isinstance(expr, expression.Number):
        return Constant(arity, float(expr.value))
    if isinstance(expr, expression.Variable):
        if expr.kind == "x":
            return Coordinate(arity, expr.index - 1)
        return Coordinate(arity, n + expr.index - 1)
    if isinstance(expr, expression.Negate):
        return -from_expr(expr.operand, n, m)
    if isinstance(expr, expression.Power):
        return from_expr(expr.base, n, m) ** expr.exponent
    if isinstance(expr, expression.Call):
        return apply_function(expr.function, from_expr(expr.argument, n, m))
    assert isinstance(expr, expression.Binary)
    left = from_expr(expr.left, n, m)
    right = from_expr(expr.right, n, m)
    if expr.op == "+":
        return left + right
    if expr.op == "-":
        return left - right
    if expr.op == "*":
        return left * right
    return left / right


def parse_field(text: str, n: int, m: int) -> ScalarField:
    return from_expr(expression.parse(text, n, m), n, m)


def x(arity: Arity, i: int) -> ScalarField:
    """The base coordinate x^(i+1)."""
    return Coordinate(arity, i)


def y(arity: Arity, alpha: int) -> ScalarField:
    """The fibre coordinate y^(alpha+1)."""
    return Coordinate(arity, arity[0] + alpha)


def constant(arity: Arity, value: float) -> ScalarField:
    return Constant(arity, float(value))


class Evaluator:
    """Evaluates fields at a fixed batch of points, sharing work between them.

    `points` has one row per variable (x first, then y) and one column per
    point. Jets of every node are cached at the highest order any request
    needs, which is determined before evaluation starts.
    """

    def __init__(self, points: numpy.ndarray):
        self.points = numpy.asarray(points, dtype=float)
        self.count = self.points.shape[1]
        self._demands: t.Dict[ScalarField, int] = {}
        self._cache: t.Dict[ScalarField, Taylor] = {}

    def _demand(self, field: ScalarField, order: int) -> None:
        if self._demands.get(field, -1) >= order:
            return
        self._demands[field] = order
        for child, child_order in field.requirements(order):
            self._demand(child, child_order)

    def jet(self, field: ScalarField, order: int) -> Taylor:
        cached = self._cache.get(field)
        if cached is None or cached.order < order:
            demand = max(order, self._demands.get(field, order))
            with numpy.errstate(all="ignore"):
                cached = field.evaluate(self, demand)
            self._cache[field] = cached
        return taylor.truncate(cached, order)

    def jets(self, fields: t.Sequence[ScalarField], order: int = 0) -> t.List[Taylor]:
        for field in fields:
            self._demand(field, order)
        return [self.jet(field, order) for field in fields]

    def values(self, fields: t.Sequence[ScalarField]) -> numpy.ndarray:
        """Values of the fields, shape (len(fields), number of points)."""
        if not fields:
            return numpy.zeros((0, self.count))
        return numpy.array([jet.value for jet in self.jets(fields, 0)])


@attr.s(auto_attribs=True, frozen=True)
class Jet:
    """All partial derivatives of a field up to some order at one point.

    Partials are keyed by sorted tuples of variable indices (x first, then
    y), so permuted multi-indices share one entry.
    """

    x: t.Tuple[float, ...]
    y: t.Tuple[float, ...]
    order: int
    partials: t.Dict[MultiIndex, float]

    @property
    def value(self) -> float:
        return self.partials[()]

    def partial(self, *names: str) -> float:
        n = len(self.x)
        indices = []
        for name in names:
            kind, number = name[0], int(name[1:])
            indices.append(number - 1 if kind == "x" else n + number - 1)
        return self.partials[tuple(sorted(indices))]


def eval_jet(
    field: ScalarField, x: t.Sequence[float], y: t.Sequence[float], order: int
) -> Jet:
    """Evaluate a field and its partial derivatives up to `order` at a point."""
    n, m = field.arity
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"Jet order must lie in 0..{MAX_ORDER}, not {order}")
    if len(x) != n or len(y) != m:
        raise ValueError(f"Point has {len(x)}+{len(y)} coordinates, the field {n}+{m}")
    point = numpy.array([*x, *y], dtype=float).reshape(n + m, 1)
    if not numpy.all(numpy.isfinite(point)):
        raise EvaluationError("Evaluation point is not finite")
    coefficients = Evaluator(point).jets([field], order)[0].coefficients[:, 0]
    if numpy.any(numpy.isnan(coefficients)):
        raise DomainError(
            f"Field is not defined at x={tuple(x)}, y={tuple(y)} (a function argument is outside its domain)"
        )
    if not numpy.all(numpy.isfinite(coefficients)):
        raise EvaluationError(f"Overflow evaluating the field at x={tuple(x)}, y={tuple(y)}")
    partials = {
        mono: float(c) * taylor.multiplicity_factorial(mono)
        for mono, c in zip(taylor.monomials(n + m, order), coefficients)
    }
    return Jet(tuple(float(v) for v in x), tuple(float(v) for v in y), order, partials)
