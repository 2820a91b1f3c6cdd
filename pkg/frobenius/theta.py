"""
Deformed flat coordinates theta_alpha(zeta) = sum_p theta_(alpha,p) zeta^p.

theta_2 is generated by the first family of densities,

    theta_(2,p) = h1_(p+1) / p!  =  [zeta^p] t1 Psi2(1; 2, 1; zeta t1, zeta e^t2),

theta_1 is known in closed form for p <= 2. Both satisfy

    d_a d_b theta_(g,p+1) = c^e_ab d_e theta_(g,p).
"""
import cmath
from dataclasses import dataclass, field
from math import factorial
from typing import Dict, List

import numpy as np

from frobenius.brackets import TDensity, characteristic, first_bracket, second_bracket
from frobenius.prepotential import structure_constants
from hydro.charts import ModuliPoint
from hydro.densities import density_h, monomial_density
from specfun.hypergeometric import psi2_diagonals
from utils.errors import BranchCut, RouteMismatch
from utils.logger import get_logger

log = get_logger("frobenius.theta")

MAX_P = 6
THETA1_MAX_P = 2
THETA_TOL = 1e-10


@dataclass
class ThetaSeries:
    alpha: int
    point: ModuliPoint
    coefficients: List[complex] = field(default_factory=list)
    route_gap: float = 0.0
    printed_gap: float | None = None


# ---------- theta_1 closed forms ----------

def _theta1_jet(p: int, t1, t2):
    """(value, gradient, Hessian) of theta_(1,p) for p <= 2."""
    e = np.exp(t2)
    lg = np.log(t1)
    if p == 0:
        zero = 0.0 * t1
        return t2, [zero, zero + 1.0], [[zero, zero], [zero, zero]]
    if p == 1:
        value = e + t1 * (t2 + lg - 1.0)
        grad = [t2 + lg, e + t1]
        hess = [[1.0 / t1, 1.0 + 0.0 * t1], [1.0 + 0.0 * t1, e]]
        return value, grad, hess
    if p == 2:
        value = t1 / 4 * (2 * (2 * e + t1) * lg + t1 * (2 * t2 - 1) + 4 * e * (t2 - 1)) + e ** 2 / 4
        grad = [(e + t1) * (lg + t2), e * t1 * lg + t1 ** 2 / 2 + e * t1 * t2 + e ** 2 / 2]
        h11 = e / t1 + 1.0 + lg + t2
        h12 = e * (lg + t2) + e + t1
        h22 = e * (t1 * lg + t1 * t2 + t1 + e)
        return value, grad, [[h11, h12], [h12, h22]]
    raise ValueError(f"theta_1 closed forms stop at p = {THETA1_MAX_P}, got {p}")


def theta_density(alpha: int, p: int) -> TDensity:
    if alpha == 2:
        m = monomial_density(1, p + 1).scaled(1.0 / factorial(p))
        return TDensity.from_monomial(f"theta_2_{p}", m)
    return TDensity(f"theta_1_{p}",
                    lambda t1, t2: _theta1_jet(p, t1, t2)[1],
                    lambda t1, t2: _theta1_jet(p, t1, t2)[2])


def theta_value(alpha: int, p: int, pt: ModuliPoint) -> complex:
    if alpha == 2:
        return complex(monomial_density(1, p + 1)(pt)) / factorial(p)
    t1, t2 = pt.t
    if t1.imag == 0 and t1.real <= 0:
        raise BranchCut(f"theta_1 needs t1 off (-inf, 0], got {t1}")
    return complex(_theta1_jet(p, t1, t2)[0])


# ---------- theta_2 generating function ----------

def theta2_from_psi2(pt: ModuliPoint, count: int) -> List[complex]:
    """zeta-coefficients of t1 Psi2(1; 2, 1; zeta t1, zeta e^t2)."""
    t1, _ = pt.t
    return [t1 * s for s in psi2_diagonals(1, 2, 1, t1, pt.b, count)]


def theta2_printed_form(pt: ModuliPoint, count: int) -> List[complex]:
    """zeta-coefficients of (1 - e^w) e^v Psi2(1; 1, 2; zeta e^v (1 - e^w), -zeta e^(v+w))."""
    v, w = pt.vw
    pref = (1 - cmath.exp(w)) * cmath.exp(v)
    return [pref * s for s in psi2_diagonals(1, 1, 2, pref, -cmath.exp(v + w), count)]


def theta_series(alpha: int, p_max: int, pt: ModuliPoint, tol: float = THETA_TOL) -> ThetaSeries:
    if alpha == 1:
        if p_max > THETA1_MAX_P:
            raise ValueError(f"theta_1 is stored up to p = {THETA1_MAX_P}")
        return ThetaSeries(1, pt, [theta_value(1, p, pt) for p in range(p_max + 1)])
    if alpha != 2:
        raise ValueError(f"alpha must be 1 or 2, got {alpha}")
    if p_max > MAX_P:
        raise ValueError(f"theta_2 coefficients stop at p = {MAX_P}")

    from_psi = theta2_from_psi2(pt, p_max + 1)
    from_h = [density_h(1, p + 1, pt) / factorial(p) for p in range(p_max + 1)]
    scale = max(1.0, max(abs(c) for c in from_h))
    gap = max(abs(a - b) for a, b in zip(from_psi, from_h)) / scale
    if gap > tol:
        raise RouteMismatch("theta_2 generating function", gap, tol)

    printed = theta2_printed_form(pt, p_max + 1)
    printed_gap = max(abs(a - b) for a, b in zip(printed, from_h)) / scale
    if printed_gap > tol:
        log.warning("printed theta_2 generating function off by %.3e", printed_gap)
    return ThetaSeries(2, pt, from_h, route_gap=gap, printed_gap=printed_gap)


# ---------- Recursions ----------

def theta_recursion_residual(gamma: int, p: int, pt: ModuliPoint) -> float:
    """max |d_a d_b theta_(g,p+1) - c^e_ab d_e theta_(g,p)|."""
    t1, t2 = pt.t
    upper = theta_density(gamma, p + 1)
    lower = theta_density(gamma, p)
    hess = np.asarray(upper.hess(t1, t2), dtype=complex)
    grad = np.asarray(lower.grad(t1, t2), dtype=complex)
    rhs = np.einsum("eab,e->ab", structure_constants(pt), grad)
    return float(np.max(np.abs(hess - rhs))) / max(1.0, float(np.max(np.abs(hess))))


def _char(index: int, h: TDensity, pt: ModuliPoint) -> np.ndarray:
    t1, t2 = pt.t
    b = first_bracket() if index == 1 else second_bracket()
    return characteristic(b, h, t1, t2)


def levelt_residuals(p: int, pt: ModuliPoint) -> Dict[str, float]:
    """
    {., hbar_(2,p-1)}_2 = (p+1) {., hbar_(2,p)}_1
    {., hbar_(1,p-1)}_2 = 2 {., hbar_(2,p-1)}_1 + p {., hbar_(1,p)}_1
    with hbar_(a,p) = int theta_(a,p+1) dx. The second line needs theta_1 up to p + 1.
    """
    out = {}
    lhs = _char(2, theta_density(2, p), pt)
    rhs = (p + 1) * _char(1, theta_density(2, p + 1), pt)
    out["second"] = float(np.max(np.abs(lhs - rhs))) / max(1.0, float(np.max(np.abs(lhs))))
    if p + 1 <= THETA1_MAX_P:
        lhs = _char(2, theta_density(1, p), pt)
        rhs = 2 * _char(1, theta_density(2, p), pt) + p * _char(1, theta_density(1, p + 1), pt)
        out["first"] = float(np.max(np.abs(lhs - rhs))) / max(1.0, float(np.max(np.abs(lhs))))
    return out


# ---------- Momentum ----------

def momentum_distance(points: List[ModuliPoint]) -> Dict[str, float]:
    """
    Distance of t1 t2 from each stored theta_(a,p), modulo scale and affine
    terms: least-squares residual relative to the non-affine part of t1 t2.
    """
    t = np.array([pt.t for pt in points], dtype=complex)
    affine = np.column_stack([np.ones(len(points)), t[:, 0], t[:, 1]])
    target = t[:, 0] * t[:, 1]
    base = np.linalg.norm(target - affine @ np.linalg.lstsq(affine, target, rcond=None)[0])

    out = {}
    stored = [(2, p) for p in range(MAX_P + 1)] + [(1, p) for p in range(THETA1_MAX_P + 1)]
    for alpha, p in stored:
        theta = np.array([theta_value(alpha, p, pt) for pt in points])
        design = np.column_stack([theta, affine])
        coef = np.linalg.lstsq(design, target, rcond=None)[0]
        out[f"theta_{alpha}_{p}"] = float(np.linalg.norm(target - design @ coef) / base)
    return out


def momentum_points(count: int = 6) -> List[ModuliPoint]:
    """Product grid t1 in [0.3, 3], t2 in [-1, 1.5]."""
    return [ModuliPoint.from_t(a, b)
            for a in np.linspace(0.3, 3.0, count) for b in np.linspace(-1.0, 1.5, count)]
