"""
Twisted periods of the logarithmic superpotential,

    p1 = -z e^(2 pi i z) e^(z v) (1 - e^w) 2F1(1 - z, 1 + z; 2; 1 - e^w)
    p2 =     e^(pi i z)  e^(z v)           2F1(z, -z; 1; e^w)

and the same numbers as contour integrals (1 - e^(2 pi i z)) / (2 pi i) int lambda^z dp/p
collapsed onto the segments [e^(v+w), e^v] and [e^v, inf).
"""
import cmath
import math
from dataclasses import dataclass

import numpy as np

from hydro.charts import ModuliPoint
from specfun.elliptic import MODULUS, PARAMETER, elliptic_E, elliptic_K
from specfun.hypergeometric import gauss_2f1
from specfun.quadrature import adaptive_quadrature
from utils.errors import ConventionMismatch, DomainError, IntegerZ, RouteMismatch
from utils.logger import get_logger

log = get_logger("mirror.periods")

CLOSED_FORM = "closed_form"
CONTOUR = "contour"
ELLIPTIC_TOL = 1e-10
TOPOLOGICAL_TOL = 1e-9
EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class PeriodValue:
    alpha: int
    z: complex
    value: complex
    route: str


def _integer(z) -> bool:
    z = complex(z)
    return z.imag == 0 and z.real == round(z.real)


# ---------------- CLOSED FORMS ----------------

def twisted_period_closed(alpha: int, z, pt: ModuliPoint) -> PeriodValue:
    z = complex(z)
    v, w = pt.vw
    x = cmath.exp(w)
    if alpha == 1:
        m = 1.0 - x
        if abs(m) >= 1:
            raise DomainError(f"p1 needs |1 - e^w| < 1, got {abs(m):.6g}")
        value = (-z * cmath.exp(2j * math.pi * z) * cmath.exp(z * v) * m
                 * gauss_2f1(1 - z, 1 + z, 2, m))
    elif alpha == 2:
        if abs(x) >= 1 and not _integer(z):
            raise DomainError(f"p2 needs |e^w| < 1, got {abs(x):.6g}")
        value = cmath.exp(1j * math.pi * z) * cmath.exp(z * v) * gauss_2f1(z, -z, 1, x)
    else:
        raise ValueError(f"alpha must be 1 or 2, got {alpha}")
    return PeriodValue(alpha, z, value, CLOSED_FORM)


# ---------------- CONTOUR ROUTE ----------------

def twisted_period_contour(alpha: int, z: float, pt: ModuliPoint, tol: float = 1e-12) -> PeriodValue:
    """
    Real v, real w < 0 and -1 < z < 0. On (e^(v+w), e^v) lambda is negative and
    lambda^z = |lambda|^z e^(i pi z); on (e^v, inf) it is positive.
    """
    v, w = (complex(c) for c in pt.vw)
    if v.imag or w.imag or w.real >= 0:
        raise DomainError("contour route needs real v and real w < 0")
    z = float(np.real(z))
    if not -1.0 < z < 0.0:
        raise DomainError(f"contour route needs -1 < z < 0, got {z}")
    a, b = math.exp(v.real), math.exp(v.real + w.real)
    pref = (1.0 - cmath.exp(2j * math.pi * z)) / (2j * math.pi)

    if alpha == 1:
        # |lambda|^z / p = p^(z-1) (a - p)^z (p - b)^-z
        res = adaptive_quadrature(lambda p: p ** (z - 1.0), b, a, tol, alpha=-z, beta=z)
        value = pref * cmath.exp(1j * math.pi * z) * res.value
    elif alpha == 2:
        res = adaptive_quadrature(lambda p: p ** (z - 1.0) * (p - b) ** (-z), a, math.inf, tol,
                                  alpha=z, beta=z - 1.0)
        value = pref * res.value
    else:
        raise ValueError(f"alpha must be 1 or 2, got {alpha}")
    return PeriodValue(alpha, z, value, CONTOUR)


def route_gap(alpha: int, z: float, pt: ModuliPoint) -> float:
    closed = twisted_period_closed(alpha, z, pt).value
    contour = twisted_period_contour(alpha, z, pt).value
    return abs(closed - contour) / max(1.0, abs(closed))


# ---------------- ELLIPTIC SPECIALIZATION ----------------

@dataclass
class EllipticReport:
    p1: complex
    p2: complex
    convention: str
    gap: float
    printed_gaps: tuple


def elliptic_forms(pt: ModuliPoint, convention: str = PARAMETER):
    """
    p1(1/2) = (2/pi) e^(v/2) (K(m) - E(m)),  m = 1 - e^w
    p2(1/2) = (2i/pi) e^(v/2) E(e^w)
    """
    v, w = pt.vw
    x = math.exp(w.real)
    m = 1.0 - x
    half = cmath.exp(v / 2)
    p1 = 2.0 / math.pi * half * (elliptic_K(m, convention) - elliptic_E(m, convention))
    p2 = 2j / math.pi * half * elliptic_E(x, convention)
    return p1, p2


def printed_elliptic_forms(pt: ModuliPoint):
    """2 e^(v/2) (E(1-e^w) - K(1-e^w)) / (pi (e^w - 1)) and -(2i/pi) e^(v/2) E(e^w)."""
    v, w = pt.vw
    x = math.exp(w.real)
    half = cmath.exp(v / 2)
    p1 = 2.0 * half * (elliptic_E(1 - x) - elliptic_K(1 - x)) / (math.pi * (x - 1.0))
    p2 = -2j / math.pi * half * elliptic_E(x)
    return p1, p2


def elliptic_specialization(pt: ModuliPoint, tol: float = ELLIPTIC_TOL) -> EllipticReport:
    """Closed-form periods at z = 1/2 against complete elliptic integrals."""
    v, w = pt.vw
    if w.imag or w.real >= 0:
        raise DomainError("elliptic specialization needs real w < 0")
    p1 = twisted_period_closed(1, 0.5, pt).value
    p2 = twisted_period_closed(2, 0.5, pt).value
    scale = max(1.0, abs(p1), abs(p2))

    tried = []
    for convention in (PARAMETER, MODULUS):
        e1, e2 = elliptic_forms(pt, convention)
        gap = max(abs(e1 - p1), abs(e2 - p2)) / scale
        tried.append((convention, gap))
        if gap <= tol:
            q1, q2 = printed_elliptic_forms(pt)
            printed = (abs(q1 - p1) / scale, abs(q2 - p2) / scale)
            if convention != PARAMETER:
                log.warning("elliptic forms only match under the %s convention", convention)
            return EllipticReport(p1, p2, convention, gap, printed)
    raise ConventionMismatch(f"elliptic forms disagree with the z = 1/2 periods: {tried}")


def half_period_reflection(alpha: int, pt: ModuliPoint) -> complex:
    """p(-1/2) = -e^-v p(1/2) for both periods."""
    v, _ = pt.vw
    return -cmath.exp(-v) * twisted_period_closed(alpha, 0.5, pt).value


# ---------------- TOPOLOGICAL COORDINATES ----------------

def _check_z(z):
    if _integer(z):
        raise IntegerZ(f"topological transform undefined at integer z = {z}")


def topological_closed(z, pt: ModuliPoint):
    """Closed forms of (p1_top, p2_top)."""
    _check_z(z)
    z = complex(z)
    v, w = pt.vw
    x = cmath.exp(w)
    ez = cmath.exp(v * z)
    pz = math.pi * z
    f_small = gauss_2f1(-z, z, 1, x)
    f_large = gauss_2f1(z + 1, 1 - z, 2, 1 - x)
    p1 = ((-1 / z + math.pi * cmath.cos(pz) / cmath.sin(pz) - 2 * EULER_GAMMA) * f_small * ez
          - pz / cmath.sin(pz) * f_large * (1 - x) * ez)
    p2 = (f_small * ez - 1) / z
    return p1, p2


def topological_matrix(z):
    """Affine map (p1, p2) -> (p1_top, p2_top) = M (p1, p2) - shift."""
    _check_z(z)
    z = complex(z)
    pz = math.pi * z
    cot = cmath.cos(pz) / cmath.sin(pz)
    mat = np.array([
        [math.pi / cmath.sin(pz) * cmath.exp(-2j * pz),
         -cmath.exp(-1j * pz) * (1 + 2 * EULER_GAMMA * z - pz * cot) / z],
        [0.0, cmath.exp(-1j * pz) / z],
    ])
    return mat, np.array([0.0, 1.0 / z])


def printed_topological_matrix(z):
    _check_z(z)
    z = complex(z)
    pz = math.pi * z
    cot = cmath.cos(pz) / cmath.sin(pz)
    mat = np.array([
        [0.0, cmath.exp(-1j * pz) / z],
        [cmath.exp(-2j * pz) * (1 + 2 * z * EULER_GAMMA - pz * cot) / z ** 2,
         -math.pi * cmath.exp(-1j * pz) * z / cmath.sin(pz)],
    ])
    return mat, np.array([1.0 / z, 0.0])


def _apply(mat_shift, z, pt):
    mat, shift = mat_shift
    p = np.array([twisted_period_closed(1, z, pt).value, twisted_period_closed(2, z, pt).value])
    return mat @ p - shift


@dataclass
class TopologicalReport:
    p1_top: complex
    p2_top: complex
    gap: float
    printed_gap: float
    printed_rows_swapped_gap: float


def topological_transform(z, pt: ModuliPoint, tol: float = TOPOLOGICAL_TOL) -> TopologicalReport:
    """Matrix route, asserted against the closed forms; the listed matrix is only measured."""
    closed = np.array(topological_closed(z, pt))
    scale = max(1.0, float(np.max(np.abs(closed))))
    routed = _apply(topological_matrix(z), z, pt)
    gap = float(np.max(np.abs(routed - closed))) / scale
    if gap > tol:
        raise RouteMismatch("topological transform", gap, tol)

    printed = _apply(printed_topological_matrix(z), z, pt)
    return TopologicalReport(
        p1_top=complex(routed[0]),
        p2_top=complex(routed[1]),
        gap=gap,
        printed_gap=float(np.max(np.abs(printed - closed))) / scale,
        printed_rows_swapped_gap=float(abs(printed[0] - closed[1])) / scale,
    )
