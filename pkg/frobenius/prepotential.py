"""
Prepotential in the flat chart

    F0 = t2 t1^2 / 2 + e^t2 t1 + t1^2 log(t1) / 2

with unit e = (t1 d/dt1 - d/dt2) / (t1 - e^t2) and Euler field E = t1 d/dt1 + d/dt2.
"""
import cmath

import numpy as np

from hydro.charts import ModuliPoint
from utils.errors import BranchCut, DomainError

ETA = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def _flat(pt: ModuliPoint):
    t1, t2 = pt.t
    if t1.imag == 0 and t1.real <= 0:
        raise BranchCut(f"log t1 needs t1 off (-inf, 0], got {t1}")
    return t1, t2


def prepotential_F0(pt: ModuliPoint) -> complex:
    t1, t2 = _flat(pt)
    return 0.5 * t2 * t1 ** 2 + cmath.exp(t2) * t1 + 0.5 * t1 ** 2 * cmath.log(t1)


def F0_third(pt: ModuliPoint) -> np.ndarray:
    """d^3 F0: c111 = 1/t1, c112 = 1, c122 = e^t2, c222 = t1 e^t2."""
    t1, t2 = pt.t
    if t1 == 0:
        raise DomainError("c111 = 1/t1 is singular at t1 = 0")
    e = cmath.exp(t2)
    c = np.empty((2, 2, 2), dtype=complex)
    for i, j, k in np.ndindex(2, 2, 2):
        twos = i + j + k
        c[i, j, k] = (1.0 / t1, 1.0, e, t1 * e)[twos]
    return c


def F0_grad(pt: ModuliPoint) -> np.ndarray:
    t1, t2 = _flat(pt)
    e = cmath.exp(t2)
    return np.array([t2 * t1 + e + t1 * cmath.log(t1) + 0.5 * t1,
                     0.5 * t1 ** 2 + e * t1])


def F0_hessian(pt: ModuliPoint) -> np.ndarray:
    t1, t2 = _flat(pt)
    e = cmath.exp(t2)
    h12 = t1 + e
    return np.array([[t2 + cmath.log(t1) + 1.5, h12], [h12, e * t1]])


# ---------- Vector fields ----------

def unit_field(pt: ModuliPoint) -> np.ndarray:
    t1, t2 = pt.t
    return np.array([t1, -1.0]) / (t1 - cmath.exp(t2))


def unit_jacobian(pt: ModuliPoint) -> np.ndarray:
    """J[i, k] = d e^i / d t_k."""
    t1, t2 = pt.t
    e = cmath.exp(t2)
    d2 = (t1 - e) ** 2
    return np.array([[-e / d2, t1 * e / d2], [1.0 / d2, -e / d2]])


def euler_field(pt: ModuliPoint) -> np.ndarray:
    t1, _ = pt.t
    return np.array([t1, 1.0 + 0j])


EULER_JACOBIAN = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)


def lie_bracket(x, dx, y, dy) -> np.ndarray:
    """[X, Y]^i = X^k d_k Y^i - Y^k d_k X^i with dX[i, k] = d_k X^i."""
    return dy @ x - dx @ y


def unit_euler_bracket(pt: ModuliPoint) -> np.ndarray:
    """[e, E] - e."""
    e = unit_field(pt)
    return lie_bracket(e, unit_jacobian(pt), euler_field(pt), EULER_JACOBIAN) - e


def structure_constants(pt: ModuliPoint) -> np.ndarray:
    """c^i_jk = eta^il c_ljk."""
    return np.einsum("il,ljk->ijk", ETA, F0_third(pt))


def product(pt: ModuliPoint, x, y) -> np.ndarray:
    return np.einsum("ijk,j,k->i", structure_constants(pt), x, y)


# ---------- Axiom checks (finite differences) ----------

def _fd_third(fun, t1, t2, h: float) -> np.ndarray:
    """Central third differences of a scalar function of (t1, t2)."""
    def f(a, b):
        return fun(ModuliPoint.from_t(t1 + a * h, t2 + b * h))

    out = np.empty((2, 2, 2), dtype=complex)
    d111 = (f(2, 0) - 2 * f(1, 0) + 2 * f(-1, 0) - f(-2, 0)) / (2 * h ** 3)
    d222 = (f(0, 2) - 2 * f(0, 1) + 2 * f(0, -1) - f(0, -2)) / (2 * h ** 3)
    d112 = (f(1, 1) - 2 * f(0, 1) + f(-1, 1) - f(1, -1) + 2 * f(0, -1) - f(-1, -1)) / (2 * h ** 3)
    d122 = (f(1, 1) - 2 * f(1, 0) + f(1, -1) - f(-1, 1) + 2 * f(-1, 0) - f(-1, -1)) / (2 * h ** 3)
    for i, j, k in np.ndindex(2, 2, 2):
        out[i, j, k] = (d111, d112, d122, d222)[i + j + k]
    return out


def quasi_homogeneity_defect(pt: ModuliPoint, h: float = 0.05) -> float:
    """
    Third differences of E(F0) - 2 F0. The defect is t1^2, so the stencil is
    exact for any h with t1 > 2h and a large step keeps rounding small.
    """
    def defect(q: ModuliPoint):
        t1, _ = q.t
        g = F0_grad(q)
        return t1 * g[0] + g[1] - 2.0 * prepotential_F0(q)

    t1, t2 = pt.t
    return float(np.max(np.abs(_fd_third(defect, t1, t2, h))))


def third_derivative_fd_gap(pt: ModuliPoint, h: float = 1e-3) -> float:
    t1, t2 = pt.t
    return float(np.max(np.abs(_fd_third(prepotential_F0, t1, t2, h) - F0_third(pt))))


def unit_flatness_defect(pt: ModuliPoint) -> float:
    """max |d_a d_b (e F0) - eta_ab|; a flat unit would make this vanish."""
    # d_a d_b (e^k d_k F0) = d_a d_b e^k F_k + d_a e^k F_kb + d_b e^k F_ka + e^k F_kab
    t1, t2 = pt.t
    e_vec = unit_field(pt)
    de = unit_jacobian(pt)
    grad, hess, third = F0_grad(pt), F0_hessian(pt), F0_third(pt)
    dde = _unit_second(t1, t2)
    out = (np.einsum("kab,k->ab", dde, grad)
           + np.einsum("ka,kb->ab", de, hess)
           + np.einsum("kb,ka->ab", de, hess)
           + np.einsum("k,kab->ab", e_vec, third))
    return float(np.max(np.abs(out - ETA)))


def _unit_second(t1, t2) -> np.ndarray:
    """dde[k, a, b] = d_a d_b e^k."""
    e = cmath.exp(t2)
    d = t1 - e
    # e^1 = t1 / d, e^2 = -1 / d with d_1 d = 1, d_2 d = -e
    d1 = np.array([1.0, -e])
    dd = np.array([[0.0, 0.0], [0.0, -e]])
    out = np.empty((2, 2, 2), dtype=complex)
    for a, b in np.ndindex(2, 2):
        # d_a d_b (1/d) = 2 d_a d d_b d / d^3 - d_ab d / d^2
        inv_ab = 2.0 * d1[a] * d1[b] / d ** 3 - dd[a, b] / d ** 2
        inv_a, inv_b = -d1[a] / d ** 2, -d1[b] / d ** 2
        t_a, t_b = (a == 0) * 1.0, (b == 0) * 1.0
        out[0, a, b] = t1 * inv_ab + t_a * inv_b + t_b * inv_a
        out[1, a, b] = -inv_ab
    return out
