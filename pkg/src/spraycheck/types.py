import enum
import typing as t

import attr
import numpy

MultiIndex = t.Tuple[int, ...]


@attr.s(auto_attribs=True, frozen=True, eq=False)
class SamplePoints:
    """A batch of points of E: base coordinates x and fibre coordinates y.

    Both arrays have one row per coordinate and one column per point.
    """

    x: numpy.ndarray
    y: numpy.ndarray

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def m(self) -> int:
        return self.y.shape[0]

    @property
    def count(self) -> int:
        return self.y.shape[1]

    @property
    def stacked(self) -> numpy.ndarray:
        return numpy.vstack([self.x, self.y])

    def point(self, k: int) -> t.Tuple[t.Tuple[float, ...], t.Tuple[float, ...]]:
        return tuple(self.x[:, k].tolist()), tuple(self.y[:, k].tolist())


class Verdict(enum.Enum):
    """How a check ended."""

    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"
    SKIPPED = "skipped"
    NOTED = "noted"

    @property
    def failing(self) -> bool:
        return self in (Verdict.FAIL, Verdict.INCONCLUSIVE)
