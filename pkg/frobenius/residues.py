"""
Landau-Ginzburg residue formulas on the critical points of lambda:

    eta_ij  = sum_q d_i lambda d_j lambda / (q^2 lambda''(q))
    c_ijk   = sum_q d_i lambda d_j lambda d_k lambda / (q^2 lambda''(q))
    g_ij    = sum_q d_i lambda d_j lambda / (lambda(q) q^2 lambda''(q))
    c^_ijk  = sum_q d_i lambda d_j lambda d_k lambda / (lambda(q)^2 q^2 lambda''(q))

the last two being the first two with lambda replaced by log lambda. The contour
route integrates d_i lambda d_j lambda / (p^2 lambda'(p)) around small circles
about each critical point instead.
"""
import cmath
from dataclasses import dataclass

import numpy as np

from hydro.charts import T_CHART, ModuliPoint
from hydro.symbol import LaxSymbol
from specfun.quadrature import circle_integral
from utils.errors import DegenerateCritical

DEGENERATE_EPS = 1e-8
CONTOUR_SCALE = 1e-2


@dataclass(frozen=True)
class CriticalData:
    q: tuple
    u: tuple


def critical_points(pt: ModuliPoint) -> CriticalData:
    """q = e^(t2/2)(e^(t2/2) +- sqrt t1), u = lambda(q) = (e^(t2/2) +- sqrt t1)^2."""
    t1, t2 = pt.t
    s = cmath.exp(t2 / 2)
    r = cmath.sqrt(t1)
    u1, u2 = (s + r) ** 2, (s - r) ** 2
    if abs(u1 - u2) < DEGENERATE_EPS:
        raise DegenerateCritical(f"u1 = u2 = {u1} at t1 = {t1}")
    return CriticalData(q=(s * (s + r), s * (s - r)), u=(u1, u2))


def _weights(sym: LaxSymbol, q, rank: int, log_form: bool):
    w = 1.0 / (q * q * sym.dpp(q))
    if log_form:
        w = w / sym.rational(q) ** (rank - 1)
    return complex(w)


def residue_tensor(pt: ModuliPoint, rank: int, chart: str = T_CHART, log_form: bool = False) -> np.ndarray:
    """Rank-2 or rank-3 residue tensor at the simple critical points."""
    sym = LaxSymbol(pt)
    out = np.zeros((2,) * rank, dtype=complex)
    for q in critical_points(pt).q:
        d = np.array([complex(x) for x in sym.d_chart(q, chart)])
        w = _weights(sym, q, rank, log_form)
        if rank == 2:
            out += w * np.einsum("i,j->ij", d, d)
        else:
            out += w * np.einsum("i,j,k->ijk", d, d, d)
    return out


def residue_eta(pt: ModuliPoint, chart: str = T_CHART) -> np.ndarray:
    return residue_tensor(pt, 2, chart)


def residue_c(pt: ModuliPoint, chart: str = T_CHART) -> np.ndarray:
    return residue_tensor(pt, 3, chart)


def residue_g_lower(pt: ModuliPoint, chart: str = T_CHART) -> np.ndarray:
    """Covariant intersection form from the log lambda residues."""
    return residue_tensor(pt, 2, chart, log_form=True)


def residue_dual_c(pt: ModuliPoint, chart: str = T_CHART) -> np.ndarray:
    return residue_tensor(pt, 3, chart, log_form=True)


def contour_tensor(pt: ModuliPoint, rank: int, chart: str = T_CHART, nodes: int = 256) -> np.ndarray:
    """Same tensors by trapezoid rules on circles of radius 1e-2 |u1 - u2|^(1/2)."""
    sym = LaxSymbol(pt)
    crit = critical_points(pt)
    radius = CONTOUR_SCALE * abs(crit.u[0] - crit.u[1]) ** 0.5
    out = np.zeros((2,) * rank, dtype=complex)
    for idx in np.ndindex(*out.shape):
        def integrand(p, idx=idx):
            d = sym.d_chart(p, chart)
            num = np.ones_like(p)
            for i in idx:
                num = num * d[i]
            return num / (p * p * sym.dp(p))
        out[idx] = sum(circle_integral(integrand, q, radius, nodes) for q in crit.q)
    return out
