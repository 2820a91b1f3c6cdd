from dataclasses import dataclass

import numpy as np

from frobenius.prepotential import euler_field
from frobenius.residues import residue_c, residue_eta, residue_g_lower
from hydro.charts import T_CHART, ModuliPoint, jacobian_t_by_vw
from utils.errors import RouteMismatch

INTERSECTION_TOL = 1e-10


# ---------- Chart changes ----------

def lower_to_vw(tensor: np.ndarray, pt: ModuliPoint) -> np.ndarray:
    """Pull a covariant tensor from the flat chart back to (v, w)."""
    jac = jacobian_t_by_vw(pt)
    out = tensor
    for axis in range(tensor.ndim):
        out = np.moveaxis(np.tensordot(jac, out, axes=([0], [axis])), 0, axis)
    return out


def upper_to_vw(tensor: np.ndarray, pt: ModuliPoint) -> np.ndarray:
    inv = np.linalg.inv(jacobian_t_by_vw(pt))
    out = tensor
    for axis in range(tensor.ndim):
        out = np.moveaxis(np.tensordot(inv, out, axes=([1], [axis])), 0, axis)
    return out


def euler_in(pt: ModuliPoint, chart: str) -> np.ndarray:
    e = euler_field(pt)
    return e if chart == T_CHART else upper_to_vw(e, pt)


# ---------- Tensors ----------

@dataclass(frozen=True)
class FrobeniusTensors:
    chart: str
    eta: np.ndarray
    c: np.ndarray
    g: np.ndarray            # contravariant intersection form

    @classmethod
    def at(cls, pt: ModuliPoint, chart: str = T_CHART) -> "FrobeniusTensors":
        return cls(chart=chart, eta=residue_eta(pt, chart), c=residue_c(pt, chart),
                   g=intersection_form(pt, chart))


def wdvv_check(pt: ModuliPoint, chart: str = T_CHART) -> float:
    """max |c_ija eta^ab c_bkl - c_ika eta^ab c_bjl|."""
    eta_inv = np.linalg.inv(residue_eta(pt, chart))
    c = residue_c(pt, chart)
    left = np.einsum("ija,ab,bkl->ijkl", c, eta_inv, c)
    return float(np.max(np.abs(left - left.transpose(0, 2, 1, 3))))


def intersection_form_algebraic(pt: ModuliPoint, chart: str = T_CHART) -> np.ndarray:
    """g^ij = E^k c_k^ij with both indices raised by eta."""
    eta_inv = np.linalg.inv(residue_eta(pt, chart))
    c = residue_c(pt, chart)
    return np.einsum("k,ia,jb,kab->ij", euler_in(pt, chart), eta_inv, eta_inv, c)


def intersection_form_residue(pt: ModuliPoint, chart: str = T_CHART) -> np.ndarray:
    return np.linalg.inv(residue_g_lower(pt, chart))


def _routes(pt: ModuliPoint, chart: str):
    alg = intersection_form_algebraic(pt, chart)
    res = intersection_form_residue(pt, chart)
    return alg, float(np.max(np.abs(alg - res))) / max(1.0, float(np.max(np.abs(alg))))


def intersection_route_gap(pt: ModuliPoint, chart: str = T_CHART) -> float:
    return _routes(pt, chart)[1]


def intersection_form(pt: ModuliPoint, chart: str = T_CHART, tol: float = INTERSECTION_TOL) -> np.ndarray:
    """Contravariant intersection form; the algebraic and log-residue routes must agree."""
    alg, gap = _routes(pt, chart)
    if gap > tol:
        raise RouteMismatch(f"intersection form ({chart})", gap, tol)
    return alg


def intersection_closed(pt: ModuliPoint) -> np.ndarray:
    """Flat chart: g11 = 2 t1 e^t2, g12 = t1 + e^t2, g22 = 2."""
    t1, _ = pt.t
    e = pt.b
    return np.array([[2 * t1 * e, t1 + e], [t1 + e, 2.0]])


VW_GRAM = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
