"""
Deformed flatness of the twisted periods in the g-flat chart (v, w):

    d_i d_j p(z) = kappa z c^k_ij d_k p(z),   c^k_ij = g^kl c^_lij.

kappa is fixed once by the better fit at z = 0.05 and then reused.
"""
from typing import Dict, Iterable

import numpy as np

from frobenius.residues import residue_c
from frobenius.structure import VW_GRAM
from hydro.charts import VW_CHART, ModuliPoint
from mirror.dual import dual_c
from mirror.periods import twisted_period_closed
from utils.logger import get_logger

log = get_logger("mirror.deformed")

SELECTION_Z = 0.05
FD_STEP = 1e-3


def period_jet(alpha: int, z, pt: ModuliPoint, h: float = FD_STEP):
    """Value, gradient and Hessian in (v, w) by central differences."""
    v, w = pt.vw

    def p(dv, dw):
        return twisted_period_closed(alpha, z, ModuliPoint.from_vw(v + dv * h, w + dw * h)).value

    p0 = p(0, 0)
    grad = np.array([(p(1, 0) - p(-1, 0)) / (2 * h), (p(0, 1) - p(0, -1)) / (2 * h)])
    hvv = (p(1, 0) - 2 * p0 + p(-1, 0)) / h ** 2
    hww = (p(0, 1) - 2 * p0 + p(0, -1)) / h ** 2
    hvw = (p(1, 1) - p(1, -1) - p(-1, 1) + p(-1, -1)) / (4 * h * h)
    return p0, grad, np.array([[hvv, hvw], [hvw, hww]])


def flatness_residual(alpha: int, z, pt: ModuliPoint, kappa: float, tensor=None) -> float:
    """max_ij |d_i d_j p - kappa z c^k_ij d_k p| / max(1, |p|)."""
    c_low = dual_c(pt) if tensor is None else tensor
    c_up = np.einsum("kl,lij->kij", VW_GRAM, c_low)
    p0, grad, hess = period_jet(alpha, z, pt)
    rhs = kappa * z * np.einsum("kij,k->ij", c_up, grad)
    return float(np.max(np.abs(hess - rhs))) / max(1.0, abs(p0))


def select_kappa(points: Iterable[ModuliPoint], z: float = SELECTION_Z) -> int:
    points = list(points)
    scores = {}
    for kappa in (1, -1):
        scores[kappa] = max(flatness_residual(alpha, z, pt, kappa)
                            for pt in points for alpha in (1, 2))
    best = min(scores, key=scores.get)
    log.info("deformed flatness normalization kappa = %+d (fit %.3e vs %.3e)",
             best, scores[best], scores[-best])
    return best


def dual_deformed_flatness(z, pt: ModuliPoint, kappa: int) -> Dict[int, float]:
    return {alpha: flatness_residual(alpha, z, pt, kappa) for alpha in (1, 2)}


def frobenius_control(z, pt: ModuliPoint, kappa: int) -> Dict[int, float]:
    """Same residual with the Frobenius structure constants in place of the dual ones."""
    c = residue_c(pt, VW_CHART)
    return {alpha: flatness_residual(alpha, z, pt, kappa, tensor=c) for alpha in (1, 2)}
