"""
The dispersionless Lax symbol

    lambda(p) = p (p - a) / (p - b) = p + t1 + b t1 / (p - b),   a = e^v, b = e^(v+w) = e^t2

and its derivatives in p and in the flat coordinates at fixed p.
"""
from dataclasses import dataclass

import numpy as np

from hydro.charts import ModuliPoint
from utils.errors import PoleHit

POLE_EPS = 1e-14


@dataclass(frozen=True)
class LaxSymbol:
    point: ModuliPoint

    @property
    def a(self) -> complex:
        return self.point.a

    @property
    def b(self) -> complex:
        return self.point.b

    @property
    def t1(self) -> complex:
        return self.b - self.a

    def __call__(self, p):
        return lax_eval(self, p)

    def rational(self, p):
        p = np.asarray(p, dtype=complex)
        return p * (p - self.a) / (p - self.b)

    def inverse(self, p):
        """lambda_2 = 1 / lambda."""
        p = np.asarray(p, dtype=complex)
        return (p - self.b) / (p * (p - self.a))

    # ---------- p-derivatives ----------

    def dp(self, p):
        p = np.asarray(p, dtype=complex)
        return 1.0 - self.b * self.t1 / (p - self.b) ** 2

    def dpp(self, p):
        p = np.asarray(p, dtype=complex)
        return 2.0 * self.b * self.t1 / (p - self.b) ** 3

    # ---------- moduli derivatives at fixed p ----------

    def d_t(self, p):
        """(d lambda / d t1, d lambda / d t2)."""
        p = np.asarray(p, dtype=complex)
        b = self.b
        return p / (p - b), b * self.t1 * p / (p - b) ** 2

    def d_vw(self, p):
        """(d lambda / d v, d lambda / d w)."""
        p = np.asarray(p, dtype=complex)
        a, b = self.a, self.b
        d_a = -p / (p - b)
        d_b = p * (p - a) / (p - b) ** 2
        # a_v = a, b_v = b, a_w = 0, b_w = b
        return a * d_a + b * d_b, b * d_b

    def d_chart(self, p, chart: str):
        return self.d_t(p) if chart == "t" else self.d_vw(p)


def lax_eval(sym: LaxSymbol, p):
    """p + e^v(e^w - 1) + e^(2v+w)(e^w - 1) / (p - e^(v+w))."""
    p = np.asarray(p, dtype=complex)
    if np.any(np.abs(p - sym.b) < POLE_EPS):
        raise PoleHit(f"lambda evaluated at its pole p = {sym.b}")
    t1 = sym.t1
    out = p + t1 + sym.b * t1 / (p - sym.b)
    return out if out.ndim else complex(out)
