"""
Exact projections of powers of the Lax symbol.

For family 1 the projection is the polynomial part of lambda^n at p = infinity,
for family 2 the principal part of lambda^-n at p = 0. Both are computed from
the numerator/denominator polynomials, never by sampling. Polynomials are
numpy.polynomial coefficient arrays, lowest degree first.
"""
from dataclasses import dataclass
from math import comb

import numpy as np
from numpy.polynomial import polynomial as P

from hydro.symbol import LaxSymbol

SAMPLE_P = np.array([2.3 + 0.7j, -1.9 + 1.1j, 0.4 - 2.2j, 3.1 - 0.3j,
                   -0.6 - 1.4j, 1.2 + 2.6j, -2.7 - 0.5j, 0.9 + 0.15j])


def _linear(root) -> np.ndarray:
    return np.array([-root, 1.0], dtype=complex)


def _pow(poly, k: int) -> np.ndarray:
    return P.polypow(poly, k) if k > 0 else np.array([1.0 + 0j])


def polynomial_part(numerator, pole, order: int) -> np.ndarray:
    """Polynomial part at infinity of numerator / (p - pole)^order."""
    quotient, _ = P.polydiv(numerator, _pow(_linear(pole), order))
    return quotient


def principal_part_at_zero(numerator, root, order: int, zero_order: int) -> np.ndarray:
    """
    Principal part at 0 of numerator / (p^zero_order (p - root)^order), returned
    as coefficients m[k] of p^-k (m[0] = 0).
    """
    n = zero_order
    # 1/(p - root)^order = (-root)^-order sum_j C(order+j-1, j) (p/root)^j
    inv = np.array([comb(order + j - 1, j) / root ** j for j in range(n)], dtype=complex)
    inv *= (-root) ** (-order)
    taylor = P.polymul(numerator, inv)[:n]
    taylor = np.pad(taylor, (0, n - taylor.size))
    m = np.zeros(n + 1, dtype=complex)
    for j in range(n):
        m[n - j] = taylor[j]
    return m


@dataclass(frozen=True)
class Laurent:
    """sum_k pos[k] p^k + sum_k neg[k] p^-k."""

    pos: np.ndarray
    neg: np.ndarray

    def __call__(self, p):
        p = np.asarray(p, dtype=complex)
        out = P.polyval(p, self.pos) if self.pos.size else np.zeros_like(p)
        for k in range(1, self.neg.size):
            out = out + self.neg[k] * p ** (-k)
        return out

    def dp(self, p):
        p = np.asarray(p, dtype=complex)
        out = P.polyval(p, P.polyder(self.pos)) if self.pos.size > 1 else np.zeros_like(p)
        for k in range(1, self.neg.size):
            out = out - k * self.neg[k] * p ** (-k - 1)
        return out


def _poly(c) -> Laurent:
    return Laurent(np.asarray(c, dtype=complex), np.zeros(1, dtype=complex))


def _principal(m) -> Laurent:
    return Laurent(np.zeros(0, dtype=complex), np.asarray(m, dtype=complex))


@dataclass(frozen=True)
class Projection:
    """M = projected power of lambda together with its derivatives in a and b."""

    value: Laurent
    d_a: Laurent
    d_b: Laurent


def project(family: int, n: int, sym: LaxSymbol) -> Projection:
    """(lambda^n)_+ for family 1, (lambda^-n)_- for family 2."""
    a, b = sym.a, sym.b
    p_n = _pow(np.array([0.0, 1.0], dtype=complex), n)
    if family == 1:
        num = P.polymul(p_n, _pow(_linear(a), n))
        num_a = -n * P.polymul(p_n, _pow(_linear(a), n - 1))
        return Projection(
            value=_poly(polynomial_part(num, b, n)),
            d_a=_poly(polynomial_part(num_a, b, n)),
            d_b=_poly(polynomial_part(n * num, b, n + 1)),
        )
    if family == 2:
        num = _pow(_linear(b), n)
        num_b = -n * _pow(_linear(b), n - 1)
        return Projection(
            value=_principal(principal_part_at_zero(num, a, n, n)),
            d_a=_principal(principal_part_at_zero(n * num, a, n + 1, n)),
            d_b=_principal(principal_part_at_zero(num_b, a, n, n)),
        )
    raise ValueError(f"family must be 1 or 2, got {family}")


def lax_residual(proj: Projection, sym: LaxSymbol, a_x, b_x, a_s, b_s, points=SAMPLE_P) -> float:
    """
    max over points of |lambda_s - p (M_p lambda_x - M_x lambda_p)|, relative to
    the size of the terms.
    """
    p = np.asarray(points, dtype=complex)
    a, b = sym.a, sym.b
    lam_a = -p / (p - b)
    lam_b = p * (p - a) / (p - b) ** 2
    lam_x = lam_a * a_x + lam_b * b_x
    m_x = proj.d_a(p) * a_x + proj.d_b(p) * b_x
    lhs = lam_a * a_s + lam_b * b_s
    rhs = p * (proj.value.dp(p) * lam_x - m_x * sym.dp(p))
    scale = max(1.0, float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
    return float(np.max(np.abs(lhs - rhs))) / scale
