"""
Almost-dual structure: the product X * Y = E^-1 . X . Y with unit E, the dual
structure constants c^_ijk = g(d_i * d_j, d_k) and the dual prepotential

    F^0 = v^2 w / 2 - Li3(e^w)

in the (v, w) chart, which is flat for the intersection form g.
"""
import cmath

import numpy as np

from frobenius.canonical import canonical_frame
from frobenius.prepotential import euler_field, product
from frobenius.residues import critical_points, residue_dual_c
from frobenius.structure import VW_GRAM, intersection_closed, lower_to_vw
from hydro.charts import T_CHART, VW_CHART, ModuliPoint, jacobian_t_by_vw
from specfun.polylog import polylog
from utils.errors import DegenerateCritical, DiscriminantHit, RouteMismatch

DUAL_TOL = 1e-10
DISCRIMINANT_EPS = 1e-10


# ---------- Dual prepotential ----------

def dual_prepotential(pt: ModuliPoint) -> complex:
    v, w = pt.vw
    return 0.5 * v * v * w - polylog(3, cmath.exp(w))


def dual_third(pt: ModuliPoint, li3_sign: float = -1.0) -> np.ndarray:
    """d^3 F^0: c^_vvw = 1, c^_www = li3_sign * Li0(e^w), the rest 0."""
    _, w = pt.vw
    c = np.zeros((2, 2, 2), dtype=complex)
    for idx in ((0, 0, 1), (0, 1, 0), (1, 0, 0)):
        c[idx] = 1.0
    c[1, 1, 1] = li3_sign * polylog(0, cmath.exp(w))
    return c


def printed_prepotential_gap(pt: ModuliPoint) -> float:
    """Distance of the residue tensor from v^2 w / 2 + Li3(e^w)."""
    return float(np.max(np.abs(residue_dual_c(pt, VW_CHART) - dual_third(pt, li3_sign=1.0))))


# ---------- Dual product ----------

def _euler_inverse(pt: ModuliPoint) -> np.ndarray:
    """E^-1 = sum_a (1/u_a) d/du_a in the flat chart."""
    try:
        crit = critical_points(pt)
    except DegenerateCritical as e:
        raise DiscriminantHit(str(e)) from e
    u = np.array(crit.u)
    if np.min(np.abs(u)) < DISCRIMINANT_EPS:
        raise DiscriminantHit(f"E is not invertible: u = {u}")
    return canonical_frame(pt) @ (1.0 / u)


def dual_product(pt: ModuliPoint, x, y, chart: str = VW_CHART) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    jac = jacobian_t_by_vw(pt) if chart == VW_CHART else np.eye(2)
    xt, yt = jac @ x, jac @ y
    out = product(pt, product(pt, _euler_inverse(pt), xt), yt)
    return out if chart == T_CHART else np.linalg.solve(jac, out)


def dual_unit(pt: ModuliPoint, chart: str = VW_CHART) -> np.ndarray:
    e = euler_field(pt)
    return e if chart == T_CHART else np.linalg.solve(jacobian_t_by_vw(pt), e)


# ---------- Dual structure constants ----------

def dual_c_algebraic(pt: ModuliPoint) -> np.ndarray:
    """g(d_a * d_b, d_c) in the flat chart, pulled back to (v, w)."""
    gram = np.linalg.inv(intersection_closed(pt))
    einv = _euler_inverse(pt)
    basis = np.eye(2)
    ct = np.empty((2, 2, 2), dtype=complex)
    for a, b in np.ndindex(2, 2):
        star = product(pt, product(pt, einv, basis[a]), basis[b])
        ct[a, b] = gram @ star
    return lower_to_vw(ct, pt)


def dual_route_gaps(pt: ModuliPoint):
    """(residue tensor, {route: relative gap}) for the algebraic and prepotential routes."""
    residue = residue_dual_c(pt, VW_CHART)
    scale = max(1.0, float(np.max(np.abs(residue))))
    gaps = {
        "algebra": float(np.max(np.abs(residue - dual_c_algebraic(pt)))) / scale,
        "prepotential": float(np.max(np.abs(residue - dual_third(pt)))) / scale,
    }
    return residue, gaps


def dual_c(pt: ModuliPoint, tol: float = DUAL_TOL) -> np.ndarray:
    """Dual structure constants in (v, w): log-residues, checked against the algebra and F^0."""
    residue, gaps = dual_route_gaps(pt)
    for route, gap in gaps.items():
        if gap > tol:
            raise RouteMismatch(f"dual c (residue vs {route})", gap, tol)
    return residue


def dual_wdvv(pt: ModuliPoint) -> float:
    c = dual_c(pt)
    left = np.einsum("ija,ab,bkl->ijkl", c, VW_GRAM, c)
    return float(np.max(np.abs(left - left.transpose(0, 2, 1, 3))))


def g_invariance_defect(pt: ModuliPoint, x, y, z) -> float:
    """|g(X * Y, Z) - g(X, Y * Z)| with the constant Gram matrix in (v, w)."""
    lhs = dual_product(pt, x, y) @ VW_GRAM @ np.asarray(z, dtype=complex)
    rhs = np.asarray(x, dtype=complex) @ VW_GRAM @ dual_product(pt, y, z)
    return float(abs(lhs - rhs))


def dual_unit_defect(pt: ModuliPoint, y) -> float:
    return float(np.max(np.abs(dual_product(pt, dual_unit(pt), y) - np.asarray(y))))


# ---------- Non-homogeneity ----------

def nonhomogeneity_residual(points) -> float:
    """
    Least-squares residual of d^3 (E^ F^0 - F^0) = 0 over linear fields
    E^ = (a1 v + a2 w + a3) d_v + (b1 v + b2 w + b3) d_w. The www equation is
    divided by Li0(e^w) so every point weighs the same.
    """
    rows, rhs = [], []
    for pt in points:
        v, w = pt.vw
        x = cmath.exp(w)
        l0 = polylog(0, x)
        lm1 = x / (1 - x) ** 2
        # columns a1 a2 a3 b1 b2 b3; components vvv, vvw, vww, www of d^3(E^ F^0)
        rows += [
            [0, 0, 0, 3, 0, 0],
            [2, 0, 0, 0, 1, 0],
            [0, 2, 0, -l0, 0, 0],
            [0, 0, 0, -v * lm1 / l0, -(3 + w * lm1 / l0), -lm1 / l0],
        ]
        rhs += [0.0, 1.0, 0.0, -1.0]
    a = np.array(rows, dtype=complex)
    b = np.array(rhs, dtype=complex)
    sol = np.linalg.lstsq(a, b, rcond=None)[0]
    return float(np.linalg.norm(a @ sol - b) / np.linalg.norm(b))
