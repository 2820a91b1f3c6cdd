"""
Complete elliptic integrals by the arithmetic-geometric mean.

Parameter convention by default: K(m) = int_0^{pi/2} dt / sqrt(1 - m sin^2 t).
`convention="modulus"` reads the argument as k with m = k^2.
"""
import math

from utils.errors import DomainError, NoConvergence

PARAMETER = "parameter"
MODULUS = "modulus"

_AGM_TOL = 1e-16
_AGM_MAX_ITER = 60


def _to_parameter(arg: float, convention: str) -> float:
    if convention == PARAMETER:
        return float(arg)
    if convention == MODULUS:
        return float(arg) ** 2
    raise DomainError(f"unknown elliptic convention {convention!r}")


def _agm(m: float):
    """Returns (AGM(1, sqrt(1-m)), sum_n 2^(n-1) c_n^2)."""
    a, b = 1.0, math.sqrt(1.0 - m)
    c2_sum = 0.5 * m
    weight = 0.5
    for _ in range(_AGM_MAX_ITER):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        weight *= 2.0
        c2_sum += weight * c * c
        if abs(c) <= _AGM_TOL * a:
            return a, c2_sum
    raise NoConvergence(f"AGM did not converge for m = {m}")


def elliptic_K(m: float, convention: str = PARAMETER) -> float:
    m = _to_parameter(m, convention)
    if not m < 1:
        raise DomainError(f"K(m) needs m < 1, got {m}")
    agm, _ = _agm(m)
    return math.pi / (2.0 * agm)


def elliptic_E(m: float, convention: str = PARAMETER) -> float:
    m = _to_parameter(m, convention)
    if m > 1:
        raise DomainError(f"E(m) needs m <= 1, got {m}")
    if m == 1:
        return 1.0
    agm, c2_sum = _agm(m)
    return math.pi / (2.0 * agm) * (1.0 - c2_sum)
