"""Truncated multivariate Taylor arithmetic, batched over sample points.

A `Taylor` holds the Taylor coefficients of a function around a batch of
points, up to a total order. Coefficients are stored in a 2-d array whose
first axis runs over multi-indices in graded order and whose second axis runs
over the points of the batch. Multi-indices are sorted tuples of variable
indices, so ``(0, 0, 2)`` stands for the monomial ``t0² t2``.

>>> monomials(2, 2)
((), (0,), (1,), (0, 0), (0, 1), (1, 1))

The graded order makes every table a prefix of the table one order higher,
so truncation is slicing.

>>> u = variable(2, 2, numpy.array([[0.5], [2.0]]), 0)
>>> w = mul(u, u)
>>> w.coefficients[:, 0].tolist()
[0.25, 1.0, 0.0, 1.0, 0.0, 0.0]
"""
import functools
import itertools
import math
import typing as t

import numpy

MultiIndex = t.Tuple[int, ...]


@functools.lru_cache(maxsize=None)
def monomials(nvars: int, order: int) -> t.Tuple[MultiIndex, ...]:
    result: t.List[MultiIndex] = []
    for degree in range(order + 1):
        result.extend(itertools.combinations_with_replacement(range(nvars), degree))
    return tuple(result)


@functools.lru_cache(maxsize=None)
def size(nvars: int, order: int) -> int:
    return math.comb(nvars + order, order)


@functools.lru_cache(maxsize=None)
def _positions(nvars: int, order: int) -> t.Dict[MultiIndex, int]:
    return {mono: i for i, mono in enumerate(monomials(nvars, order))}


def position(nvars: int, multi_index: t.Iterable[int]) -> int:
    """The row of a multi-index in every coefficient table of `nvars` variables."""
    key = tuple(sorted(multi_index))
    return _positions(nvars, len(key))[key]


def multiplicity_factorial(multi_index: MultiIndex) -> int:
    """Product of the factorials of the repetition counts.

    Turns a Taylor coefficient into the corresponding partial derivative.

    >>> multiplicity_factorial((0, 0, 1, 1, 1))
    12
    """
    result = 1
    for _, group in itertools.groupby(multi_index):
        result *= math.factorial(len(list(group)))
    return result


@functools.lru_cache(maxsize=None)
def _product_table(
    nvars: int, order: int
) -> t.Tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]:
    monos = monomials(nvars, order)
    index = _positions(nvars, order)
    triples = []
    for i, a in enumerate(monos):
        for j, b in enumerate(monos[: size(nvars, order - len(a))]):
            triples.append((index[tuple(sorted(a + b))], i, j))
    triples.sort()
    target, left, right = (numpy.array(c, dtype=numpy.intp) for c in zip(*triples))
    starts = numpy.flatnonzero(numpy.r_[True, target[1:] != target[:-1]])
    return left, right, starts


@functools.lru_cache(maxsize=None)
def _partial_table(
    nvars: int, order: int, multi_index: MultiIndex
) -> t.Tuple[numpy.ndarray, numpy.ndarray]:
    source_index = _positions(nvars, order + len(multi_index))
    sources = []
    factors = []
    for mono in monomials(nvars, order):
        shifted = tuple(sorted(mono + multi_index))
        sources.append(source_index[shifted])
        factors.append(
            multiplicity_factorial(shifted) / multiplicity_factorial(mono)
        )
    return numpy.array(sources, dtype=numpy.intp), numpy.array(factors)


class Taylor:
    """Taylor coefficients of one scalar function at a batch of points."""

    __slots__ = ("coefficients", "nvars", "order")

    def __init__(self, coefficients: numpy.ndarray, nvars: int, order: int):
        self.coefficients = coefficients
        self.nvars = nvars
        self.order = order

    @property
    def value(self) -> numpy.ndarray:
        return self.coefficients[0]

    def __repr__(self):
        return f"<Taylor nvars={self.nvars} order={self.order} points={self.coefficients.shape[1]}>"


def zeros(nvars: int, order: int, count: int) -> Taylor:
    return Taylor(numpy.zeros((size(nvars, order), count)), nvars, order)


def constant(nvars: int, order: int, count: int, value: float) -> Taylor:
    result = zeros(nvars, order, count)
    result.coefficients[0] = value
    return result


def variable(nvars: int, order: int, points: numpy.ndarray, var: int) -> Taylor:
    result = zeros(nvars, order, points.shape[1])
    result.coefficients[0] = points[var]
    if order >= 1:
        result.coefficients[1 + var] = 1.0
    return result


def truncate(u: Taylor, order: int) -> Taylor:
    if order == u.order:
        return u
    if order > u.order:
        raise ValueError(f"Cannot raise a jet of order {u.order} to order {order}")
    return Taylor(u.coefficients[: size(u.nvars, order)], u.nvars, order)


def add(u: Taylor, v: Taylor) -> Taylor:
    return Taylor(u.coefficients + v.coefficients, u.nvars, u.order)


def scale(u: Taylor, factor: float) -> Taylor:
    return Taylor(u.coefficients * factor, u.nvars, u.order)


def linear_combination(
    terms: t.Sequence[Taylor], factors: t.Sequence[float], offset: float = 0.0
) -> Taylor:
    first = terms[0]
    coefficients = first.coefficients * factors[0]
    for term, factor in zip(terms[1:], factors[1:]):
        coefficients = coefficients + term.coefficients * factor
    if offset:
        coefficients = coefficients.copy()
        coefficients[0] += offset
    return Taylor(coefficients, first.nvars, first.order)


def mul(u: Taylor, v: Taylor) -> Taylor:
    if u.order == 0:
        return Taylor(u.coefficients * v.coefficients, u.nvars, 0)
    left, right, starts = _product_table(u.nvars, u.order)
    products = u.coefficients[left] * v.coefficients[right]
    return Taylor(numpy.add.reduceat(products, starts, axis=0), u.nvars, u.order)


def compose(u: Taylor, series: t.Sequence[numpy.ndarray]) -> Taylor:
    """Evaluate Σ_k series[k]·(u − u₀)^k with Horner's scheme.

    `series[k]` holds the k-th Taylor coefficient of the outer function at
    the value u₀ of `u`, one entry per point.
    """
    offset = Taylor(u.coefficients.copy(), u.nvars, u.order)
    offset.coefficients[0] = 0.0
    result = zeros(u.nvars, u.order, u.coefficients.shape[1])
    result.coefficients[0] = series[u.order]
    for k in range(u.order - 1, -1, -1):
        result = mul(result, offset)
        result.coefficients[0] += series[k]
    return result


def _nonpositive_to_nan(base: numpy.ndarray, strict: bool) -> numpy.ndarray:
    bad = base <= 0 if strict else base < 0
    return numpy.where(bad, numpy.nan, base)


def _series(name: str, u0: numpy.ndarray, order: int) -> t.List[numpy.ndarray]:
    fact = [math.factorial(k) for k in range(order + 1)]
    with numpy.errstate(all="ignore"):
        if name == "exp":
            e = numpy.exp(u0)
            return [e / fact[k] for k in range(order + 1)]
        if name in ("sin", "cos"):
            shift = 0.0 if name == "sin" else math.pi / 2
            return [
                numpy.sin(u0 + shift + k * math.pi / 2) / fact[k]
                for k in range(order + 1)
            ]
        if name in ("sinh", "cosh"):
            even, odd = numpy.sinh(u0), numpy.cosh(u0)
            if name == "cosh":
                even, odd = odd, even
            return [(even if k % 2 == 0 else odd) / fact[k] for k in range(order + 1)]
        if name == "log":
            base = _nonpositive_to_nan(u0, strict=True)
            return [numpy.log(base)] + [
                (-1) ** (k + 1) / (k * base**k) for k in range(1, order + 1)
            ]
        if name == "sqrt":
            base = _nonpositive_to_nan(u0, strict=order > 0)
            result = []
            binomial = 1.0
            for k in range(order + 1):
                result.append(binomial * base ** (0.5 - k))
                binomial *= (0.5 - k) / (k + 1)
            return result
        if name == "reciprocal":
            base = numpy.where(u0 == 0, numpy.nan, u0)
            return [(-1) ** k * base ** (-k - 1) for k in range(order + 1)]
    raise ValueError(f"Unknown function {name}")


def apply(name: str, u: Taylor) -> Taylor:
    """Apply one of the supported univariate functions to a jet.

    >>> u = variable(1, 3, numpy.array([[0.0]]), 0)
    >>> [round(c, 12) for c in apply("sin", u).coefficients[:, 0]]
    [0.0, 1.0, 0.0, -0.166666666667]
    """
    if name == "tan":
        return mul(apply("sin", u), apply("reciprocal", apply("cos", u)))
    with numpy.errstate(all="ignore"):
        return compose(u, _series(name, u.coefficients[0], u.order))


def power(u: Taylor, exponent: int) -> Taylor:
    if exponent < 0:
        return apply("reciprocal", power(u, -exponent))
    result = constant(u.nvars, u.order, u.coefficients.shape[1], 1.0)
    base = u
    while exponent:
        if exponent & 1:
            result = mul(result, base)
        exponent >>= 1
        if exponent:
            base = mul(base, base)
    return result


def partial(u: Taylor, multi_index: MultiIndex, order: int) -> Taylor:
    """The jet of a partial derivative, one order lower per differentiation."""
    if u.order < order + len(multi_index):
        raise ValueError(
            f"A jet of order {u.order} cannot give order {order} after {len(multi_index)} derivatives"
        )
    sources, factors = _partial_table(u.nvars, order, multi_index)
    return Taylor(
        u.coefficients[sources] * factors[:, None], u.nvars, order
    )
