"""
Points of the two-dimensional moduli space in the flat chart (t1, t2) or the
(v, w) chart, with

    t1 = e^v (e^w - 1),   t2 = v + w
    v  = log(e^t2 - t1),  w = t2 - log(e^t2 - t1)

Logs are principal; test domains keep e^t2 - t1 off the negative real axis.
"""
import cmath
from dataclasses import dataclass

import numpy as np

from utils.errors import BranchCut

T_CHART = "t"
VW_CHART = "vw"


@dataclass(frozen=True)
class ModuliPoint:
    chart: str
    first: complex
    second: complex

    def __post_init__(self):
        if self.chart not in (T_CHART, VW_CHART):
            raise ValueError(f"unknown chart {self.chart!r}")
        object.__setattr__(self, "first", complex(self.first))
        object.__setattr__(self, "second", complex(self.second))

    # ---------- Constructors ----------

    @classmethod
    def from_t(cls, t1, t2) -> "ModuliPoint":
        return cls(T_CHART, t1, t2)

    @classmethod
    def from_vw(cls, v, w) -> "ModuliPoint":
        return cls(VW_CHART, v, w)

    # ---------- Conversions ----------

    @property
    def t(self):
        if self.chart == T_CHART:
            return self.first, self.second
        return vw_to_t(self.first, self.second)

    @property
    def vw(self):
        if self.chart == VW_CHART:
            return self.first, self.second
        return t_to_vw(self.first, self.second)

    @property
    def a(self) -> complex:
        """Zero of the Lax symbol, e^v = e^t2 - t1."""
        if self.chart == VW_CHART:
            return cmath.exp(self.first)
        return cmath.exp(self.second) - self.first

    @property
    def b(self) -> complex:
        """Pole of the Lax symbol, e^(v+w) = e^t2."""
        if self.chart == VW_CHART:
            return cmath.exp(self.first + self.second)
        return cmath.exp(self.second)

    def in_chart(self, chart: str) -> "ModuliPoint":
        if chart == self.chart:
            return self
        return ModuliPoint(chart, *(self.t if chart == T_CHART else self.vw))


def vw_to_t(v, w):
    return cmath.exp(v) * (cmath.exp(w) - 1.0), v + w


def t_to_vw(t1, t2):
    a = cmath.exp(t2) - t1
    if a.imag == 0 and a.real <= 0:
        raise BranchCut(f"e^t2 - t1 = {a} lies on the log branch cut")
    v = cmath.log(a)
    return v, t2 - v


def jacobian_t_by_vw(pt: ModuliPoint) -> np.ndarray:
    """d(t1, t2)/d(v, w): rows t1, t2; columns v, w."""
    a, b = pt.a, pt.b
    return np.array([[b - a, b], [1.0, 1.0]], dtype=complex)


def jacobian_vw_by_t(pt: ModuliPoint) -> np.ndarray:
    return np.linalg.inv(jacobian_t_by_vw(pt))


def random_vw_points(rng: np.random.Generator, count: int, v_range=(-0.5, 0.5),
                     w_range=(-2.0, -0.2)):
    """Real v, real w < 0: keeps e^w inside (0, 1)."""
    vs = rng.uniform(*v_range, count)
    ws = rng.uniform(*w_range, count)
    return [ModuliPoint.from_vw(v, w) for v, w in zip(vs, ws)]


def random_t_points(rng: np.random.Generator, count: int, t1_range=(0.2, 2.0),
                    t2_range=(-0.5, 1.0)):
    """Real t1 > 0 and t1 < e^t2 - 0.1 so that a = e^v stays positive."""
    points = []
    while len(points) < count:
        t1 = rng.uniform(*t1_range)
        t2 = rng.uniform(*t2_range)
        if np.exp(t2) - t1 > 0.1:
            points.append(ModuliPoint.from_t(t1, t2))
    return points
