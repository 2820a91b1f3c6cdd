import cmath
from dataclasses import dataclass

import numpy as np

from frobenius.prepotential import product, unit_field
from frobenius.residues import critical_points
from hydro.charts import ModuliPoint
from hydro.symbol import LaxSymbol
from utils.errors import RouteMismatch

CANONICAL_TOL = 1e-12


@dataclass(frozen=True)
class CanonicalCoords:
    u1: complex
    u2: complex
    q1: complex
    q2: complex


def canonical_coords(pt: ModuliPoint, tol: float = CANONICAL_TOL) -> CanonicalCoords:
    """Critical values u of lambda and the critical points q, labels by the + branch of sqrt t1."""
    crit = critical_points(pt)
    sym = LaxSymbol(pt)
    for q, u in zip(crit.q, crit.u):
        scale = max(1.0, abs(u))
        slope = abs(complex(sym.dp(q)))
        if slope > tol * scale:
            raise RouteMismatch("lambda'(q)", slope, tol)
        gap = abs(complex(sym.rational(q)) - u) / scale
        if gap > tol:
            raise RouteMismatch("lambda(q) - u", gap, tol)
    return CanonicalCoords(u1=crit.u[0], u2=crit.u[1], q1=crit.q[0], q2=crit.q[1])


def canonical_jacobian(pt: ModuliPoint) -> np.ndarray:
    """U[a, i] = d u_a / d t_i with u_a = (s +- r)^2, s = e^(t2/2), r = sqrt t1."""
    t1, t2 = pt.t
    s, r = cmath.exp(t2 / 2), cmath.sqrt(t1)
    return np.array([[(s + r) / r, s * (s + r)],
                     [-(s - r) / r, s * (s - r)]])


def canonical_frame(pt: ModuliPoint) -> np.ndarray:
    """Columns are d/du_1, d/du_2 written in the flat chart."""
    return np.linalg.inv(canonical_jacobian(pt))


def idempotent_defect(pt: ModuliPoint) -> float:
    """max over a, b of |d_a . d_b - delta_ab d_a| for the canonical directions."""
    frame = canonical_frame(pt)
    worst = 0.0
    for a in range(2):
        for b in range(2):
            prod = product(pt, frame[:, a], frame[:, b])
            target = frame[:, a] if a == b else np.zeros(2)
            worst = max(worst, float(np.max(np.abs(prod - target))))
    return worst


def unit_in_canonical_defect(pt: ModuliPoint) -> float:
    """|e - (d/du_1 + d/du_2)|."""
    return float(np.max(np.abs(unit_field(pt) - canonical_frame(pt).sum(axis=1))))
