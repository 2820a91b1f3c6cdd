"""
Special functions against closed forms and scipy.special.
"""
import math

from scipy import special

from specfun.elliptic import MODULUS, elliptic_E, elliptic_K
from specfun.hypergeometric import gauss_2f1, humbert_psi2, pochhammer
from specfun.polylog import polylog
from specfun.quadrature import adaptive_quadrature
from verification.context import Suite, SuiteContext
from verification.report import upper_bound

SPECFUN = Suite("specfun")


def _rel(got, want) -> float:
    return abs(complex(got) - complex(want)) / max(1.0, abs(complex(want)))


@SPECFUN.check("pochhammer")
def poch(ctx: SuiteContext):
    name = SPECFUN.qualified("pochhammer")
    rng = ctx.rng(name)
    residuals = []
    for _ in range(ctx.points):
        a, n = rng.uniform(0.1, 4.0), int(rng.integers(0, 12))
        residuals.append(_rel(pochhammer(a, n), special.poch(a, n)))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-12))]


@SPECFUN.check("gauss_2f1")
def gauss(ctx: SuiteContext):
    """2F1(1, 1; 2; x) = -log(1 - x) / x, 2F1(a, b; b; x) = (1 - x)^-a and scipy.special.hyp2f1."""
    name = SPECFUN.qualified("gauss_2f1")
    rng = ctx.rng(name)
    residuals = []
    for _ in range(ctx.points):
        x = rng.uniform(-0.8, 0.8)
        a, b, c = rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(0.5, 3.0)
        residuals += [
            _rel(gauss_2f1(1, 1, 2, x), -math.log1p(-x) / x),
            _rel(gauss_2f1(a, b, b, x), (1 - x) ** (-a)),
            _rel(gauss_2f1(a, b, c, x), special.hyp2f1(a, b, c, x)),
        ]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-12))]


@SPECFUN.check("gauss_derivative")
def gauss_derivative(ctx: SuiteContext):
    """d/dx 2F1(a, b; c; x) = (a b / c) 2F1(a + 1, b + 1; c + 1; x) against a central difference."""
    name = SPECFUN.qualified("gauss_derivative")
    rng = ctx.rng(name)
    h = 1e-5
    residuals = []
    for _ in range(20):
        x = rng.uniform(-0.7, 0.7)
        a, b, c = rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(0.5, 3.0)
        slope = (gauss_2f1(a, b, c, x + h) - gauss_2f1(a, b, c, x - h)) / (2 * h)
        residuals.append(_rel(slope, a * b / c * gauss_2f1(a + 1, b + 1, c + 1, x)))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-6))]


@SPECFUN.check("humbert_psi2")
def psi2(ctx: SuiteContext):
    """Psi2(a; b, c; x, 0) = 1F1(a; b; x) and the swap symmetry in (b, x) <-> (c, y)."""
    name = SPECFUN.qualified("humbert_psi2")
    rng = ctx.rng(name)
    residuals = []
    for _ in range(ctx.points):
        a, b, c = rng.uniform(0.2, 2.0, 3)
        x, y = rng.uniform(-1.5, 1.5, 2)
        residuals += [
            _rel(humbert_psi2(a, b, c, x, 0.0), special.hyp1f1(a, b, x)),
            _rel(humbert_psi2(a, b, c, x, y), humbert_psi2(a, c, b, y, x)),
        ]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-10))]


@SPECFUN.check("polylog")
def li(ctx: SuiteContext):
    name = SPECFUN.qualified("polylog")
    rng = ctx.rng(name)
    residuals = [_rel(polylog(2, 0.5), math.pi ** 2 / 12 - math.log(2) ** 2 / 2)]
    for x in rng.uniform(-0.9, 0.9, ctx.points):
        residuals += [
            _rel(polylog(0, x), x / (1 - x)),
            _rel(polylog(1, x), -math.log1p(-x)),
            _rel(polylog(2, x), _dilog(x)),
        ]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-12))]


@SPECFUN.check("polylog_ladder")
def polylog_ladder(ctx: SuiteContext):
    """d/dw Li_s(e^w) = Li_{s-1}(e^w) for s = 1, 2, 3."""
    name = SPECFUN.qualified("polylog_ladder")
    rng = ctx.rng(name)
    h = 1e-5
    residuals = []
    for w in rng.uniform(-3.0, -0.1, ctx.points):
        for s in (1, 2, 3):
            slope = (polylog(s, math.exp(w + h)) - polylog(s, math.exp(w - h))) / (2 * h)
            residuals.append(_rel(slope, polylog(s - 1, math.exp(w))))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-6))]


def _dilog(x: float) -> float:
    """Li2(x) = spence(1 - x) in scipy's convention."""
    return float(special.spence(1 - x))


@SPECFUN.check("elliptic")
def elliptic(ctx: SuiteContext):
    """AGM values against scipy.special.ellipk/ellipe and Legendre's relation."""
    name = SPECFUN.qualified("elliptic")
    rng = ctx.rng(name)
    residuals = [_rel(elliptic_K(0.0), math.pi / 2), _rel(elliptic_E(0.0), math.pi / 2)]
    for m in rng.uniform(0.01, 0.99, ctx.points):
        k_m, e_m = elliptic_K(m), elliptic_E(m)
        k_c, e_c = elliptic_K(1 - m), elliptic_E(1 - m)
        residuals += [
            _rel(k_m, special.ellipk(m)),
            _rel(e_m, special.ellipe(m)),
            _rel(e_m * k_c + e_c * k_m - k_m * k_c, math.pi / 2),
            _rel(elliptic_K(math.sqrt(m), MODULUS), k_m),
        ]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-13))]


@SPECFUN.check("elliptic_hypergeometric")
def elliptic_hypergeometric(ctx: SuiteContext):
    """K(m) = (pi / 2) 2F1(1/2, 1/2; 1; m): the AGM against the series."""
    name = SPECFUN.qualified("elliptic_hypergeometric")
    rng = ctx.rng(name)
    residuals = [_rel(elliptic_K(m), math.pi / 2 * gauss_2f1(0.5, 0.5, 1.0, m))
                 for m in rng.uniform(0.0, 0.9, ctx.points)]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-12))]


@SPECFUN.check("quadrature")
def quadrature(ctx: SuiteContext):
    """Beta integrals with endpoint weights and a mapped half-line integral."""
    name = SPECFUN.qualified("quadrature")
    rng = ctx.rng(name)
    residuals = [_rel(adaptive_quadrature(lambda p: math.exp(-p), 0.0, math.inf, 1e-12).value, 1.0)]
    for _ in range(10):
        alpha, beta = rng.uniform(-0.9, 1.0, 2)
        got = adaptive_quadrature(lambda p: 1.0, 0.0, 1.0, 1e-12, alpha=alpha, beta=beta).value
        residuals.append(_rel(got, special.beta(alpha + 1, beta + 1)))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-10))]
