"""
Hamiltonian densities of the dispersionless flows

    h1_n = (1/n) [p^0] of lambda^n at p = infinity
    h2_n = (1/n) [p^0] of lambda^-n at p = 0

with closed forms

    h1_n = ((-1)^n e^(n v) / n) 2F1(-n, n; 1; e^w)
    h2_n = ((-1)^n e^(-n v) / n) 2F1(n, -n; 1; e^w).
"""
from dataclasses import dataclass
from math import factorial
from typing import Tuple

import numpy as np

from hydro.charts import ModuliPoint
from specfun.hypergeometric import gauss_2f1, pochhammer
from utils.errors import RouteMismatch
from utils.logger import get_logger

log = get_logger("hydro.densities")

MAX_ORDER = 12
ROUTE_TOL = 1e-12


# ---------- Residue route ----------

def _truncated_power(coeffs: np.ndarray, n: int, order: int) -> np.ndarray:
    """Coefficients up to `order` of (sum_k coeffs[k] z^k)^n."""
    out = np.zeros(order + 1, dtype=complex)
    out[0] = 1.0
    base = coeffs[:order + 1]
    for _ in range(n):
        out = np.convolve(out, base)[:order + 1]
    return out


def _residue_route(family: int, n: int, a: complex, b: complex) -> complex:
    k = np.arange(n + 1)
    if family == 1:
        # lambda = p r(1/p),  r = 1 + sum_{k>=1} b^(k-1) (b - a) u^k
        series = np.where(k == 0, 1.0 + 0j, b ** (k - 1.0) * (b - a))
    else:
        # 1/lambda = s(p) / p,  s = b/a + sum_{k>=1} (b - a) / a^(k+1) p^k
        series = np.where(k == 0, b / a, (b - a) / a ** (k + 1.0))
    return complex(_truncated_power(series.astype(complex), n, n)[n]) / n


def _closed_route(family: int, n: int, v: complex, w: complex) -> complex:
    sign = (-1) ** n
    if family == 1:
        return sign * np.exp(n * v) / n * gauss_2f1(-n, n, 1, np.exp(w))
    return sign * np.exp(-n * v) / n * gauss_2f1(n, -n, 1, np.exp(w))


def _routes(family: int, n: int, pt: ModuliPoint):
    if family not in (1, 2):
        raise ValueError(f"family must be 1 or 2, got {family}")
    if not 1 <= n <= MAX_ORDER:
        raise ValueError(f"density order must be in 1..{MAX_ORDER}, got {n}")
    v, w = pt.vw
    closed = _closed_route(family, n, v, w)
    residue = _residue_route(family, n, pt.a, pt.b)
    # the terminating 2F1 cancels terms of size `scale`; compare relative to it
    scale = max(1.0, monomial_density(family, n).magnitude(pt))
    return closed, abs(closed - residue) / scale


def density_route_gap(family: int, n: int, pt: ModuliPoint) -> float:
    return float(_routes(family, n, pt)[1])


def density_h(family: int, n: int, pt: ModuliPoint, tol: float = ROUTE_TOL) -> complex:
    """h(family)_n at `pt` from the closed form, cross-checked against the residue series."""
    closed, gap = _routes(family, n, pt)
    if gap > tol:
        raise RouteMismatch(f"h{family}_{n}", gap, tol)
    return closed


def al_density(pt: ModuliPoint) -> complex:
    """-(h1_1 + h2_1)/2 = (1 - e^w) cosh v."""
    return -0.5 * (density_h(1, 1, pt) + density_h(2, 1, pt))


# ---------- Monomial form ----------

@dataclass(frozen=True)
class MonomialDensity:
    """sum_k coeff_k a^alpha_k b^beta_k with a = e^v, b = e^(v+w)."""

    terms: Tuple[Tuple[complex, float, float], ...]

    def __add__(self, other: "MonomialDensity") -> "MonomialDensity":
        return MonomialDensity(self.terms + other.terms)

    def scaled(self, c: complex) -> "MonomialDensity":
        return MonomialDensity(tuple((c * k, al, be) for k, al, be in self.terms))

    def magnitude(self, pt: ModuliPoint) -> float:
        a, b = pt.a, pt.b
        return float(sum(abs(c * a ** al * b ** be) for c, al, be in self.terms))

    def ab_jet(self, a, b):
        """f, f_a, f_b, f_aa, f_ab, f_bb; a and b may be arrays."""
        jet = [0.0] * 6
        for c, al, be in self.terms:
            m = c * a ** al * b ** be
            jet[0] = jet[0] + m
            jet[1] = jet[1] + al * m / a
            jet[2] = jet[2] + be * m / b
            jet[3] = jet[3] + al * (al - 1) * m / a ** 2
            jet[4] = jet[4] + al * be * m / (a * b)
            jet[5] = jet[5] + be * (be - 1) * m / b ** 2
        return jet

    def __call__(self, pt: ModuliPoint) -> complex:
        return complex(self.ab_jet(pt.a, pt.b)[0])

    def grad_vw(self, a, b):
        """(f_v, f_w)."""
        _, fa, fb, *_ = self.ab_jet(a, b)
        return a * fa + b * fb, b * fb

    def grad_t(self, a, b):
        """(f_t1, f_t2) using a = e^t2 - t1, b = e^t2."""
        _, fa, fb, *_ = self.ab_jet(a, b)
        return -fa, b * (fa + fb)

    def hess_t(self, a, b):
        _, fa, fb, faa, fab, fbb = self.ab_jet(a, b)
        h11 = faa
        h12 = -b * (faa + fab)
        h22 = b * (fa + fb) + b ** 2 * (faa + 2.0 * fab + fbb)
        return np.array([[h11, h12], [h12, h22]])


def monomial_density(family: int, n: int) -> MonomialDensity:
    terms = []
    for k in range(n + 1):
        c = pochhammer(-n, k) * pochhammer(n, k) / factorial(k) ** 2 * (-1) ** n / n
        if c == 0:
            continue
        if family == 1:
            terms.append((c, float(n - k), float(k)))
        else:
            terms.append((c, float(-n - k), float(k)))
    return MonomialDensity(tuple(terms))


def al_monomial_density() -> MonomialDensity:
    return (monomial_density(1, 1) + monomial_density(2, 1)).scaled(-0.5)
