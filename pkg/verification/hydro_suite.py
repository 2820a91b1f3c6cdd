"""
Dispersionless checks: the Lax symbol, the two coordinate charts, the
densities, the Lax flows against both Hamiltonian brackets, commutativity and
conservation under the method-of-lines solver.
"""
import numpy as np

from frobenius.brackets import TDensity, poisson_flow, t_rate_to_vw
from hydro.charts import ModuliPoint, random_vw_points
from hydro.continuum import harmonic_profile
from hydro.densities import al_density, density_h, density_route_gap, monomial_density
from hydro.field import HydroField
from hydro.flows import flow_commutator, hydro_flow_rhs, lax_identity_residual
from hydro.pde import pde_integrate
from hydro.projections import SAMPLE_P
from hydro.symbol import LaxSymbol, lax_eval
from simulation.metrics import compute_drift
from verification.context import Suite, SuiteContext
from verification.report import upper_bound

HYDRO = Suite("hydro")

# ---------------- CONFIG ----------------
DENSITY_MAX_N = 8
IDENTITY_FLOWS = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]
# flow -> [(bracket index, density family, density order)]
BRACKET_ROUTES = {
    (1, 1): [(1, 1, 2), (2, 1, 1)],
    (1, 2): [(1, 1, 3), (2, 1, 2)],
    (2, 1): [(2, 2, 1)],
    (2, 2): [(1, 2, 1), (2, 2, 2)],
}


def random_field(rng: np.random.Generator, grid: int = 64, length: float = 2 * np.pi) -> HydroField:
    """Smooth periodic (v, w) with three random harmonics each and w kept below zero."""
    v0, w0 = rng.uniform(-0.3, 0.3), rng.uniform(-1.2, -0.4)
    k = 2 * np.pi / length
    cv, pv = rng.uniform(0, 0.05, 3), rng.uniform(0, 2 * np.pi, 3)
    cw, pw = rng.uniform(0, 0.05, 3), rng.uniform(0, 2 * np.pi, 3)

    def v(x):
        return v0 + sum(cv[j] * np.sin((j + 1) * k * x + pv[j]) for j in range(3))

    def w(x):
        return w0 + sum(cw[j] * np.cos((j + 1) * k * x + pw[j]) for j in range(3))

    return HydroField.from_profile(grid, length, v, w)


def _relative(got, want) -> float:
    want = np.asarray(want)
    return float(np.max(np.abs(np.asarray(got) - want))) / max(1e-300, float(np.max(np.abs(want))))


# ---------------- SYMBOL AND CHARTS ----------------

@HYDRO.check("lax_inverse")
def lax_inverse(ctx: SuiteContext):
    name = HYDRO.qualified("lax_inverse")
    rng = ctx.rng(name)
    residuals = []
    for pt in random_vw_points(rng, ctx.points):
        p_values = np.concatenate([SAMPLE_P, rng.normal(0, 2, 8) + 1j * rng.normal(0, 2, 8)])
        sym = LaxSymbol(pt)
        residuals.append(float(np.max(np.abs(lax_eval(sym, p_values) * sym.inverse(p_values) - 1.0))))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-13))]


@HYDRO.check("lax_rational")
def lax_rational(ctx: SuiteContext):
    """Partial-fraction evaluation against p (p - a) / (p - b)."""
    name = HYDRO.qualified("lax_rational")
    rng = ctx.rng(name)
    residuals = []
    for pt in random_vw_points(rng, ctx.points):
        sym = LaxSymbol(pt)
        value = lax_eval(sym, SAMPLE_P)
        residuals.append(float(np.max(np.abs(value - sym.rational(SAMPLE_P)) / np.maximum(1.0, np.abs(value)))))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-13))]


@HYDRO.check("chart_roundtrip")
def chart_roundtrip(ctx: SuiteContext):
    name = HYDRO.qualified("chart_roundtrip")
    rng = ctx.rng(name)
    residuals = []
    for pt in random_vw_points(rng, ctx.points):
        back = ModuliPoint.from_t(*pt.t)
        scale = max(1.0, max(abs(c) for c in pt.vw))
        residuals.append(float(np.max(np.abs(np.subtract(back.vw, pt.vw)))) / scale)
    return [upper_bound(name, residuals, ctx.tol(name, 1e-14))]


# ---------------- DENSITIES ----------------

@HYDRO.check("densities")
def densities(ctx: SuiteContext):
    name = HYDRO.qualified("densities")
    rng = ctx.rng(name)
    points = random_vw_points(rng, ctx.points)
    residuals = [density_route_gap(family, n, pt)
                 for pt in points for family in (1, 2) for n in range(1, DENSITY_MAX_N + 1)]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-12))]


@HYDRO.check("density_closed_forms")
def density_closed_forms(ctx: SuiteContext):
    """h1_1 = t1, h1_2 = t1^2 / 2 + t1 e^t2 and the AL density (1 - e^w) cosh v."""
    name = HYDRO.qualified("density_closed_forms")
    rng = ctx.rng(name)
    residuals = []
    for pt in random_vw_points(rng, ctx.points):
        t1, t2 = pt.t
        v, w = pt.vw
        residuals += [
            abs(density_h(1, 1, pt) - t1),
            abs(density_h(1, 2, pt) - (0.5 * t1 ** 2 + t1 * np.exp(t2))),
            abs(al_density(pt) - (1 - np.exp(w)) * np.cosh(v)),
        ]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-12))]


# ---------------- FLOWS ----------------

@HYDRO.check("lax_identity")
def lax_identity(ctx: SuiteContext):
    name = HYDRO.qualified("lax_identity")
    rng = ctx.rng(name)
    residuals = []
    for pt in random_vw_points(rng, ctx.points):
        a_x, b_x = rng.normal(size=2) + 1j * rng.normal(size=2)
        residuals += [lax_identity_residual(flow, pt.a, pt.b, a_x, b_x) for flow in IDENTITY_FLOWS]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-10))]


@HYDRO.check("bracket_routes")
def bracket_routes(ctx: SuiteContext):
    """Each Lax flow is Hamiltonian for both brackets with neighbouring densities."""
    name = HYDRO.qualified("bracket_routes")
    rng = ctx.rng(name)
    residuals = []
    for _ in range(3):
        f = random_field(rng)
        for flow, routes in BRACKET_ROUTES.items():
            dv, dw = hydro_flow_rhs(flow, f)
            for index, family, order in routes:
                h = TDensity.from_monomial(f"h{family}_{order}", monomial_density(family, order))
                v_s, w_s = t_rate_to_vw(f, *poisson_flow(index, h, f))
                residuals.append(_relative(np.concatenate([v_s, w_s]), np.concatenate([dv, dw])))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-9))]


@HYDRO.check("casimirs")
def casimirs(ctx: SuiteContext):
    """int t1 and int t2 generate nothing under the first bracket, int t2 nothing under the second."""
    name = HYDRO.qualified("casimirs")
    f = random_field(ctx.rng(name))
    residuals = []
    for index, c1, c2 in ((1, 1.0, 0.0), (1, 0.0, 1.0), (2, 0.0, 1.0)):
        t1_s, t2_s = poisson_flow(index, TDensity.linear("casimir", c1, c2), f)
        residuals.append(float(np.max(np.abs(np.concatenate([t1_s, t2_s])))))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-13))]


@HYDRO.check("constant_field")
def constant_field(ctx: SuiteContext):
    name = HYDRO.qualified("constant_field")
    rng = ctx.rng(name)
    residuals = []
    for pt in random_vw_points(rng, 5):
        v, w = pt.vw
        f = HydroField(2 * np.pi, np.full(32, v), np.full(32, w))
        for flow in IDENTITY_FLOWS:
            dv, dw = hydro_flow_rhs(flow, f)
            residuals.append(float(np.max(np.abs(np.concatenate([dv, dw])))))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-12))]


@HYDRO.check("flow_commutativity")
def flow_commutativity(ctx: SuiteContext):
    name = HYDRO.qualified("flow_commutativity")
    rng = ctx.rng(name)
    residuals = []
    for _ in range(2):
        f = random_field(rng, grid=32)
        residuals += [flow_commutator(f, (1, 1), (2, 1)), flow_commutator(f, (1, 1), (1, 2))]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-6))]


@HYDRO.check("pde_conservation")
def pde_conservation(ctx: SuiteContext):
    name = HYDRO.qualified("pde_conservation")
    cfg = ctx.section("hydro")
    prof = cfg.get("profile") or {}
    profile = harmonic_profile(prof.get("v0", 0.0), prof.get("w0", -0.7), prof.get("amplitude", 0.1))
    f = HydroField.from_profile(128, profile.length, profile.v, profile.w)
    residuals = []
    for flow in ((1, 1), (2, 1)):
        result = pde_integrate(f, flow, 0.1, record_every=5)
        residuals += [d["max_rel_drift"] for d in compute_drift(result.curves).values()]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-8))]
