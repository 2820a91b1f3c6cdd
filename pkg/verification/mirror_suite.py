"""
Almost-dual structure and twisted periods on the (v, w) chart.
"""
import numpy as np

from hydro.charts import ModuliPoint, random_vw_points
from mirror.deformed import dual_deformed_flatness, frobenius_control, select_kappa
from mirror.dual import (
    dual_route_gaps,
    dual_unit_defect,
    dual_wdvv,
    g_invariance_defect,
    nonhomogeneity_residual,
    printed_prepotential_gap,
)
from mirror.periods import (
    elliptic_specialization,
    half_period_reflection,
    route_gap,
    topological_transform,
    twisted_period_contour,
)
from verification.context import Suite, SuiteContext
from verification.report import lower_bound, record, upper_bound

MIRROR = Suite("mirror")

# ---------------- CONFIG ----------------
DEFORMED_Z = (0.3, -0.25)
TOPOLOGICAL_Z = (-0.25, -0.5, -0.75, 0.3)


def _vectors(rng: np.random.Generator, count: int):
    return [rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(count)]


def period_points(ctx: SuiteContext):
    pts = ctx.section("periods").get("points") or []
    return [ModuliPoint.from_vw(v, w) for v, w in pts]


def period_z(ctx: SuiteContext):
    return [float(z) for z in ctx.section("periods").get("z") or []]


# ---------------- ALMOST-DUAL PRODUCT ----------------

@MIRROR.check("dual_c")
def dual_c_routes(ctx: SuiteContext):
    name = MIRROR.qualified("dual_c")
    gaps = {"algebra": [], "prepotential": []}
    for pt in random_vw_points(ctx.rng(name), ctx.points):
        for route, gap in dual_route_gaps(pt)[1].items():
            gaps[route].append(gap)
    printed = MIRROR.qualified("dual_prepotential_printed")
    return [
        upper_bound(MIRROR.qualified("dual_c_algebra"), gaps["algebra"], ctx.tol(name, 1e-10)),
        upper_bound(MIRROR.qualified("dual_c_prepotential"), gaps["prepotential"], ctx.tol(name, 1e-10)),
        record(printed, [printed_prepotential_gap(pt) for pt in random_vw_points(ctx.rng(printed), 10)]),
    ]


@MIRROR.check("dual_wdvv")
def wdvv(ctx: SuiteContext):
    name = MIRROR.qualified("dual_wdvv")
    residuals = [dual_wdvv(pt) for pt in random_vw_points(ctx.rng(name), ctx.points)]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-10))]


@MIRROR.check("dual_invariance")
def invariance(ctx: SuiteContext):
    """g(X * Y, Z) = g(X, Y * Z)."""
    name = MIRROR.qualified("dual_invariance")
    rng = ctx.rng(name)
    residuals = []
    for pt in random_vw_points(rng, ctx.points):
        x, y, z = _vectors(rng, 3)
        scale = max(1.0, float(np.linalg.norm(x) * np.linalg.norm(y) * np.linalg.norm(z)))
        residuals.append(g_invariance_defect(pt, x, y, z) / scale)
    return [upper_bound(name, residuals, ctx.tol(name, 1e-10))]


@MIRROR.check("dual_unit")
def unit(ctx: SuiteContext):
    """The Euler field is the unit of the dual product."""
    name = MIRROR.qualified("dual_unit")
    rng = ctx.rng(name)
    residuals = []
    for pt in random_vw_points(rng, ctx.points):
        (y,) = _vectors(rng, 1)
        residuals.append(dual_unit_defect(pt, y) / max(1.0, float(np.max(np.abs(y)))))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-12))]


@MIRROR.check("nonhomogeneity")
def nonhomogeneity(ctx: SuiteContext):
    name = MIRROR.qualified("nonhomogeneity")
    points = random_vw_points(ctx.rng(name), 12, w_range=(-4.0, -0.3))
    return [lower_bound(name, [nonhomogeneity_residual(points)], 0.01)]


# ---------------- TWISTED PERIODS ----------------

@MIRROR.check("periods")
def periods(ctx: SuiteContext):
    name = MIRROR.qualified("periods")
    gaps = [route_gap(alpha, z, pt)
            for z in period_z(ctx) for pt in period_points(ctx) for alpha in (1, 2)]
    return [upper_bound(name, gaps, ctx.tol(name, 1e-6))]


@MIRROR.check("half_period")
def half_period(ctx: SuiteContext):
    """p(-1/2) by quadrature against -e^-v p(1/2) from the closed form."""
    name = MIRROR.qualified("half_period")
    gaps = []
    for pt in period_points(ctx):
        for alpha in (1, 2):
            want = half_period_reflection(alpha, pt)
            got = twisted_period_contour(alpha, -0.5, pt).value
            gaps.append(abs(got - want) / max(1.0, abs(want)))
    return [upper_bound(name, gaps, ctx.tol(name, 1e-6))]


@MIRROR.check("elliptic")
def elliptic(ctx: SuiteContext):
    name = MIRROR.qualified("elliptic")
    reports = [elliptic_specialization(pt, tol=ctx.tol(name, 1e-10))
               for pt in random_vw_points(ctx.rng(name), min(ctx.points, 20))]
    conventions = sorted({r.convention for r in reports})
    return [
        upper_bound(name, [r.gap for r in reports], ctx.tol(name, 1e-10),
                    detail=f"convention {', '.join(conventions)}"),
        record(MIRROR.qualified("elliptic_printed_forms"), [g for r in reports for g in r.printed_gaps]),
    ]


@MIRROR.check("topological")
def topological(ctx: SuiteContext):
    name = MIRROR.qualified("topological")
    reports = [topological_transform(z, pt, tol=np.inf)
               for z in TOPOLOGICAL_Z for pt in period_points(ctx)]
    return [
        upper_bound(name, [r.gap for r in reports], ctx.tol(name, 1e-9)),
        record(MIRROR.qualified("topological_printed_matrix"), [r.printed_gap for r in reports]),
        record(MIRROR.qualified("topological_printed_rows_swapped"),
               [r.printed_rows_swapped_gap for r in reports]),
    ]


@MIRROR.check("deformed_flatness")
def deformed_flatness(ctx: SuiteContext):
    """Second derivatives of the periods close under the dual product (finite differences)."""
    name = MIRROR.qualified("deformed_flatness")
    points = period_points(ctx)
    kappa = select_kappa(points[:3])
    residuals, control = [], []
    for z in DEFORMED_Z:
        for pt in points:
            residuals += list(dual_deformed_flatness(z, pt, kappa).values())
            control += list(frobenius_control(z, pt, kappa).values())
    return [
        upper_bound(name, residuals, ctx.tol(name, 1e-5), detail=f"kappa {kappa:+d}"),
        record(MIRROR.qualified("deformed_flatness_frobenius_control"), control),
    ]
