"""
One-dimensional quadrature for complex integrands with algebraic endpoint
singularities, plus a trapezoidal rule on circles for small contour integrals.
"""
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from utils.errors import NoConvergence

# QUADPACK algebraic-weight rules sample the closed interval; p = a + u/(1-u) stays finite here
INF_EDGE = 1e-12


@dataclass
class QuadratureResult:
    value: complex
    error: float


def _quad_weighted(g: Callable[[float], complex], lo: float, hi: float,
                   alpha: float, beta: float, tol: float, limit: int):
    """int_lo^hi g(u) (u-lo)^alpha (hi-u)^beta du, real and imaginary parts separately."""
    kwargs = dict(epsabs=tol, epsrel=tol, limit=limit, full_output=1)
    if alpha != 0.0 or beta != 0.0:
        kwargs.update(weight="alg", wvar=(alpha, beta))

    value = 0.0 + 0.0j
    error = 0.0
    for part, unit in ((lambda u: complex(g(u)).real, 1.0),
                       (lambda u: complex(g(u)).imag, 1.0j)):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            out = integrate.quad(part, lo, hi, **kwargs)
        if len(out) > 3:
            raise NoConvergence(f"quadrature on [{lo}, {hi}] failed: {out[3]}")
        value += unit * out[0]
        error += out[1]
    return value, error


def adaptive_quadrature(
    f: Callable[[float], complex],
    a: float,
    b: float,
    tol: float = 1e-10,
    *,
    alpha: float = 0.0,
    beta: float | None = None,
    limit: int = 500,
) -> QuadratureResult:
    """
    Finite b:   int_a^b f(p) (p-a)^alpha (b-p)^beta dp
    b = inf:    int_a^inf f(p) (p-a)^alpha dp, mapped by p = a + u/(1-u).
                `beta` then declares the decay f(p)(p-a)^alpha ~ p^beta at infinity
                (beta < -1); omit it when the mapped integrand stays bounded.

    f carries only the regular part; the declared exponents must be > -1.
    """
    if alpha <= -1:
        raise NoConvergence(f"endpoint exponent {alpha} is not integrable")

    if math.isfinite(b):
        beta = 0.0 if beta is None else beta
        if beta <= -1:
            raise NoConvergence(f"endpoint exponent {beta} is not integrable")
        value, error = _quad_weighted(f, a, b, alpha, beta, tol, limit)
        return QuadratureResult(value=value, error=error)

    if beta is None:
        def mapped(u):
            u = min(u, 1.0 - INF_EDGE)
            return f(a + u / (1.0 - u)) * (1.0 - u) ** (-alpha - 2.0)
        end = 0.0
    else:
        if beta >= -1:
            raise NoConvergence(f"tail exponent {beta} is not integrable at infinity")

        def mapped(u):
            u = min(u, 1.0 - INF_EDGE)
            return f(a + u / (1.0 - u)) * (1.0 - u) ** (beta - alpha)
        end = -beta - 2.0

    value, error = _quad_weighted(mapped, 0.0, 1.0, alpha, end, tol, limit)
    return QuadratureResult(value=value, error=error)


def circle_integral(f: Callable[[np.ndarray], np.ndarray], center: complex,
                    radius: float, nodes: int = 128) -> complex:
    """(1/2 pi i) times the integral of f around |p - center| = radius, counter-clockwise."""
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    p = center + radius * np.exp(1j * theta)
    # dp / (2 pi i) = radius e^{i theta} d theta / (2 pi)
    return complex(np.mean(f(p) * (p - center)))
