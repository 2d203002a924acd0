# -*- coding: utf-8 -*-
import typing as t

import attr
import numpy

from spraycheck.jet.field import Evaluator, ScalarField
from spraycheck.types import SamplePoints

from . import fs

__all__ = ["fs", "sample_points", "Residual", "pointwise", "summarize", "measure"]

# A check is inconclusive when more than this share of its points is skipped.
SKIP_LIMIT = 0.1

def sample_points(
    n: int,
    m: int,
    count: int = 100,
    seed: int = 42,
    x_range: t.Tuple[float, float] = (-1.0, 1.0),
    y_range: t.Tuple[float, float] = (0.5, 2.0),
) -> SamplePoints:
    """Draw reproducible points of E.

    Base coordinates are uniform in `x_range`; every fibre coordinate has a
    magnitude uniform in `y_range` and a random sign, which keeps y away from
    the zero section.

    >>> points = sample_points(2, 3, count=5, seed=1)
    >>> points.x.shape, points.y.shape
    ((2, 5), (3, 5))
    >>> bool(numpy.all(numpy.abs(points.y) >= 0.5))
    True
    """
    rng = numpy.random.default_rng(seed)
    x = rng.uniform(x_range[0], x_range[1], size=(n, count))
    magnitudes = rng.uniform(y_range[0], y_range[1], size=(m, count))
    signs = rng.choice([-1.0, 1.0], size=(m, count))
    return SamplePoints(x, magnitudes * signs)


@attr.s(auto_attribs=True, frozen=True)
class Residual:
    """Summary of a residual over a batch of points."""

    maximum: float
    mean: float
    evaluated: int
    skipped: int

    @property
    def inconclusive(self) -> bool:
        return self.evaluated == 0 or self.skipped > SKIP_LIMIT * (
            self.evaluated + self.skipped
        )

    def within(self, tol: float) -> bool:
        return not self.inconclusive and self.maximum <= tol


def pointwise(evaluator: Evaluator, fields: t.Sequence[ScalarField]) -> numpy.ndarray:
    """Per point, the largest absolute value among the fields.

    Points where any field cannot be evaluated get NaN.
    """
    fields = [f for f in fields if not f.is_zero]
    if not fields:
        return numpy.zeros(evaluator.count)
    values = numpy.abs(evaluator.values(fields))
    result = values.max(axis=0)
    result[~numpy.all(numpy.isfinite(values), axis=0)] = numpy.nan
    return result


def summarize(*per_point: numpy.ndarray) -> Residual:
    """Merge per-point residual arrays of the same points into a summary."""
    combined = per_point[0]
    for other in per_point[1:]:
        combined = numpy.maximum(combined, other)
    good = numpy.isfinite(combined)
    evaluated = int(good.sum())
    if evaluated == 0:
        return Residual(float("nan"), float("nan"), 0, len(combined))
    return Residual(
        float(combined[good].max()),
        float(combined[good].mean()),
        evaluated,
        len(combined) - evaluated,
    )


def measure(evaluator: Evaluator, fields: t.Sequence[ScalarField]) -> Residual:
    return summarize(pointwise(evaluator, fields))


def evaluator_for(points: SamplePoints) -> Evaluator:
    return Evaluator(points.stacked)
