"""
Hydrodynamic Poisson brackets in the flat chart

    {t^i(x), t^j(y)} = g^ij delta'(x - y) + G^ij_k t^k_x delta(x - y)

Bracket 1 has g = eta and no delta terms. Bracket 2 has g equal to the
intersection form and the delta terms

    {t1, t1}_2 ~ (t1 e^t2)',   {t1, t2}_2 ~ (t1 + e^t2)',   {t2, t2}_2 ~ 0.

The coefficients are stored the way they are listed; the flow of a density h
reads them with the first two indices exchanged,

    t^i_s = (g^ij d_j d_k h + G^ji_k d_j h) t^k_x,

which is the reading under which int t2 dx is a Casimir of both brackets.
"""
from dataclasses import dataclass
from typing import Callable

import numpy as np

from frobenius.prepotential import unit_field, unit_jacobian
from hydro.charts import ModuliPoint
from hydro.densities import MonomialDensity, monomial_density
from hydro.field import HydroField

GAMMA_TOL = 1e-12


# ---------------- DENSITIES ----------------

@dataclass(frozen=True)
class TDensity:
    """A hydrodynamic density h(t1, t2) known through its gradient and Hessian."""

    name: str
    grad: Callable      # (t1, t2) -> [h_1, h_2]
    hess: Callable      # (t1, t2) -> [[h_11, h_12], [h_21, h_22]]

    @classmethod
    def from_monomial(cls, name: str, m: MonomialDensity) -> "TDensity":
        def ab(t1, t2):
            b = np.exp(t2)
            return b - t1, b
        return cls(name, lambda t1, t2: m.grad_t(*ab(t1, t2)),
                   lambda t1, t2: m.hess_t(*ab(t1, t2)))

    @classmethod
    def linear(cls, name: str, c1: complex, c2: complex) -> "TDensity":
        def grad(t1, t2):
            one = np.ones_like(np.asarray(t1, dtype=complex))
            return [c1 * one, c2 * one]

        def hess(t1, t2):
            zero = np.zeros_like(np.asarray(t1, dtype=complex))
            return [[zero, zero], [zero, zero]]
        return cls(name, grad, hess)

    def scaled(self, c: complex) -> "TDensity":
        return TDensity(
            f"{c}*{self.name}",
            lambda t1, t2: [c * g for g in self.grad(t1, t2)],
            lambda t1, t2: [[c * h for h in row] for row in self.hess(t1, t2)],
        )


# ---------------- BRACKETS ----------------

@dataclass(frozen=True)
class HydroBracket:
    name: str
    metric: Callable          # (t1, t2) -> g[i, j]
    dmetric: Callable         # (t1, t2) -> dg[k, i, j]
    ddmetric: Callable        # (t1, t2) -> ddg[k, l, i, j]
    printed_gamma: Callable   # (t1, t2) -> G[i, j, k] as listed

    def flow_gamma(self, t1, t2) -> np.ndarray:
        return np.swapaxes(self.printed_gamma(t1, t2), 0, 1)


def _zeros(t1, *lead):
    shape = np.shape(t1)
    return np.zeros(lead + shape, dtype=complex)


def first_bracket() -> HydroBracket:
    def metric(t1, t2):
        g = _zeros(t1, 2, 2)
        g[0, 1] = g[1, 0] = 1.0
        return g

    return HydroBracket(
        name="bracket_1",
        metric=metric,
        dmetric=lambda t1, t2: _zeros(t1, 2, 2, 2),
        ddmetric=lambda t1, t2: _zeros(t1, 2, 2, 2, 2),
        printed_gamma=lambda t1, t2: _zeros(t1, 2, 2, 2),
    )


def second_bracket() -> HydroBracket:
    def metric(t1, t2):
        e = np.exp(t2)
        g = _zeros(t1, 2, 2)
        g[0, 0] = 2 * t1 * e
        g[0, 1] = g[1, 0] = t1 + e
        g[1, 1] = 2.0
        return g

    def dmetric(t1, t2):
        e = np.exp(t2)
        d = _zeros(t1, 2, 2, 2)
        d[0, 0, 0] = 2 * e
        d[0, 0, 1] = d[0, 1, 0] = 1.0
        d[1, 0, 0] = 2 * t1 * e
        d[1, 0, 1] = d[1, 1, 0] = e
        return d

    def ddmetric(t1, t2):
        e = np.exp(t2)
        dd = _zeros(t1, 2, 2, 2, 2)
        dd[0, 1, 0, 0] = dd[1, 0, 0, 0] = 2 * e
        dd[1, 1, 0, 0] = 2 * t1 * e
        dd[1, 1, 0, 1] = dd[1, 1, 1, 0] = e
        return dd

    def printed_gamma(t1, t2):
        e = np.exp(t2)
        gam = _zeros(t1, 2, 2, 2)
        gam[0, 0, 0] = e
        gam[0, 0, 1] = t1 * e
        gam[0, 1, 0] = 1.0
        gam[0, 1, 1] = e
        return gam

    return HydroBracket("bracket_2", metric, dmetric, ddmetric, printed_gamma)


def pencil(lam: float) -> HydroBracket:
    """g_2 + lam g_1."""
    one, two = first_bracket(), second_bracket()
    return HydroBracket(
        name=f"pencil({lam})",
        metric=lambda t1, t2: two.metric(t1, t2) + lam * one.metric(t1, t2),
        dmetric=lambda t1, t2: two.dmetric(t1, t2) + lam * one.dmetric(t1, t2),
        ddmetric=lambda t1, t2: two.ddmetric(t1, t2) + lam * one.ddmetric(t1, t2),
        printed_gamma=lambda t1, t2: two.printed_gamma(t1, t2) + lam * one.printed_gamma(t1, t2),
    )


def bracket(index: int) -> HydroBracket:
    if index == 1:
        return first_bracket()
    if index == 2:
        return second_bracket()
    raise ValueError(f"bracket index must be 1 or 2, got {index}")


def gamma_symmetry_defect(b: HydroBracket, pt: ModuliPoint) -> float:
    """max |G^ij_k + G^ji_k - d_k g^ij|."""
    t1, t2 = pt.t
    gam = b.printed_gamma(t1, t2)
    dg = np.moveaxis(b.dmetric(t1, t2), 0, -1)
    return float(np.max(np.abs(gam + np.swapaxes(gam, 0, 1) - dg)))


# ---------------- FLOWS ----------------

def characteristic(b: HydroBracket, h: TDensity, t1, t2) -> np.ndarray:
    """A^i_k = g^ij h_jk + G^ji_k h_j (flow reading of the delta terms)."""
    g = b.metric(t1, t2)
    gam = b.flow_gamma(t1, t2)
    grad = np.asarray(h.grad(t1, t2), dtype=complex)
    hess = np.asarray(h.hess(t1, t2), dtype=complex)
    return np.einsum("ij...,jk...->ik...", g, hess) + np.einsum("ijk...,j...->ik...", gam, grad)


def poisson_flow(index: int, h: TDensity, f: HydroField):
    """(d t1 / ds, d t2 / ds) on the field for the flow {., int h dx}_index."""
    t1, t2 = f.t1, f.t2
    tx = np.array([f.ddx(t1), f.ddx(t2)])
    a_mat = characteristic(bracket(index), h, t1, t2)
    rate = np.einsum("ik...,k...->i...", a_mat, tx)
    return rate[0], rate[1]


def t_rate_to_vw(f: HydroField, t1_s, t2_s):
    """v = log(e^t2 - t1): v_s = (e^t2 t2_s - t1_s) / a, w_s = t2_s - v_s."""
    v_s = (f.b * t2_s - t1_s) / f.a
    return v_s, t2_s - v_s


# ---------------- PENCIL GEOMETRY ----------------

def riemann(g: np.ndarray, dg: np.ndarray, ddg: np.ndarray) -> np.ndarray:
    """
    R^i_jkl of the contravariant metric g^ij from exact partials
    dg[k] = d_k g, ddg[k, l] = d_k d_l g.
    """
    G = np.linalg.inv(g)
    dG = np.array([-G @ dg[k] @ G for k in range(2)])
    ddG = np.empty((2, 2, 2, 2), dtype=complex)
    for m, k in np.ndindex(2, 2):
        ddG[m, k] = -(dG[m] @ dg[k] @ G + G @ ddg[m, k] @ G + G @ dg[k] @ dG[m])

    # first kind: low[l, j, k] = (d_j G_lk + d_k G_lj - d_l G_jk) / 2
    low = 0.5 * (np.einsum("jlk->ljk", dG) + np.einsum("klj->ljk", dG) - dG)
    chris = np.einsum("il,ljk->ijk", g, low)
    d_low = 0.5 * (np.einsum("mjlk->mljk", ddG) + np.einsum("mklj->mljk", ddG)
                   - ddG)
    d_chris = np.einsum("mil,ljk->mijk", dg, low) + np.einsum("il,mljk->mijk", g, d_low)

    r = (np.einsum("kilj->ijkl", d_chris) - np.einsum("likj->ijkl", d_chris)
         + np.einsum("ikm,mlj->ijkl", chris, chris) - np.einsum("ilm,mkj->ijkl", chris, chris))
    return r


def pencil_flatness(pt: ModuliPoint, lams=(0.3, 1.0, 2.7)) -> dict:
    """max |R| of g_2 + lam g_1 for each lam."""
    t1, t2 = pt.t
    out = {}
    for lam in lams:
        b = pencil(lam)
        out[lam] = float(np.max(np.abs(riemann(b.metric(t1, t2), b.dmetric(t1, t2), b.ddmetric(t1, t2)))))
    return out


def lie_derivative(x, dx, g, dg) -> np.ndarray:
    """(Lie_X g)^ij = X^k d_k g^ij - g^kj d_k X^i - g^ik d_k X^j, with dx[i, k] = d_k X^i."""
    return np.einsum("k,kij->ij", x, dg) - dx @ g - g @ dx.T


def unit_exactness_defect(pt: ModuliPoint) -> float:
    """max |Lie_e g_2 - g_1|; an exact pencil with X = e would make it vanish."""
    t1, t2 = pt.t
    two, one = second_bracket(), first_bracket()
    lie = lie_derivative(unit_field(pt), unit_jacobian(pt), two.metric(t1, t2), two.dmetric(t1, t2))
    return float(np.max(np.abs(lie - one.metric(t1, t2))))


# ---------------- RECURSIONS ----------------

RECURSION_MAX = 5


def _relative(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return float(np.max(np.abs(lhs - rhs))) / max(1.0, float(np.max(np.abs(lhs))))


def recursion_check(n: int, pt: ModuliPoint) -> dict:
    """
    A_2(h1_n) = A_1(h1_(n+1)) and A_2(h2_(n+1)) = A_1(h2_n): the second family
    climbs the recursion in the opposite order.
    """
    if not 1 <= n <= RECURSION_MAX:
        raise ValueError(f"recursion order must be in 1..{RECURSION_MAX}, got {n}")
    t1, t2 = pt.t
    one, two = first_bracket(), second_bracket()

    def dens(family, order):
        return TDensity.from_monomial(f"h{family}_{order}", monomial_density(family, order))

    return {
        "first": _relative(characteristic(two, dens(1, n), t1, t2),
                           characteristic(one, dens(1, n + 1), t1, t2)),
        "second": _relative(characteristic(two, dens(2, n + 1), t1, t2),
                            characteristic(one, dens(2, n), t1, t2)),
    }
