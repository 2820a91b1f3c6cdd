"""
Frobenius manifold checks on the flat chart: the metric and structure constants
from residues against the prepotential, WDVV, unit and Euler field, canonical
coordinates, the intersection form, the bihamiltonian recursions, the theta
series and the pencil geometry.
"""
import numpy as np

from frobenius.brackets import (
    RECURSION_MAX,
    gamma_symmetry_defect,
    pencil_flatness,
    recursion_check,
    second_bracket,
    unit_exactness_defect,
)
from frobenius.canonical import canonical_coords, idempotent_defect, unit_in_canonical_defect
from frobenius.prepotential import (
    ETA,
    F0_third,
    quasi_homogeneity_defect,
    third_derivative_fd_gap,
    unit_euler_bracket,
    unit_flatness_defect,
)
from frobenius.residues import contour_tensor, residue_c, residue_eta
from frobenius.structure import (
    intersection_closed,
    intersection_form,
    intersection_route_gap,
    lower_to_vw,
    wdvv_check,
)
from frobenius.theta import (
    MAX_P,
    THETA1_MAX_P,
    levelt_residuals,
    momentum_distance,
    momentum_points,
    theta_recursion_residual,
    theta_series,
)
from hydro.charts import VW_CHART, random_t_points, random_vw_points
from verification.context import Suite, SuiteContext
from verification.report import lower_bound, record, upper_bound

FROBENIUS = Suite("frobenius")

# ---------------- CONFIG ----------------
CONTOUR_POINTS = 20
PENCIL_POINTS = 20
PENCIL_LAMBDAS = (0.3, 1.0, 2.7)
LEVELT_MAX_P = 4


def _rel(got, want) -> float:
    want = np.asarray(want)
    return float(np.max(np.abs(np.asarray(got) - want))) / max(1.0, float(np.max(np.abs(want))))


def _points(ctx: SuiteContext, name: str, count: int | None = None):
    return random_t_points(ctx.rng(name), ctx.points if count is None else count)


# ---------------- METRIC AND PRODUCT ----------------

@FROBENIUS.check("eta")
def eta(ctx: SuiteContext):
    name = FROBENIUS.qualified("eta")
    residuals = [_rel(residue_eta(pt), ETA) for pt in _points(ctx, name)]
    contour = FROBENIUS.qualified("eta_contour")
    contour_gaps = [_rel(contour_tensor(pt, 2), residue_eta(pt))
                    for pt in _points(ctx, contour, min(ctx.points, CONTOUR_POINTS))]
    pullback = FROBENIUS.qualified("eta_chart_pullback")
    pull_gaps = [_rel(residue_eta(pt, VW_CHART), lower_to_vw(residue_eta(pt), pt))
                 for pt in _points(ctx, pullback)]
    return [
        upper_bound(name, residuals, ctx.tol(name, 1e-10)),
        upper_bound(contour, contour_gaps, ctx.tol(contour, 1e-8)),
        upper_bound(pullback, pull_gaps, ctx.tol(pullback, 1e-10)),
    ]


@FROBENIUS.check("c_vs_prepotential")
def c_vs_prepotential(ctx: SuiteContext):
    name = FROBENIUS.qualified("c_vs_prepotential")
    residuals = [_rel(residue_c(pt), F0_third(pt)) for pt in _points(ctx, name)]
    # central third differences cannot reach the residue accuracy in double precision
    fd = FROBENIUS.qualified("c_vs_prepotential_fd")
    fd_gaps = [third_derivative_fd_gap(pt) for pt in _points(ctx, fd, 20)]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-8)), record(fd, fd_gaps)]


@FROBENIUS.check("wdvv")
def wdvv(ctx: SuiteContext):
    name = FROBENIUS.qualified("wdvv")
    points = _points(ctx, name)
    residuals = [wdvv_check(pt) for pt in points]
    moved = [wdvv_check(pt, VW_CHART) for pt in points]
    return [
        upper_bound(name, residuals, ctx.tol(name, 1e-10)),
        upper_bound(FROBENIUS.qualified("wdvv_vw_chart"), moved, ctx.tol(name, 1e-10)),
    ]


@FROBENIUS.check("unit_euler")
def unit_euler(ctx: SuiteContext):
    name = FROBENIUS.qualified("unit_euler")
    points = _points(ctx, name)
    brackets = [float(np.max(np.abs(unit_euler_bracket(pt)))) for pt in points]
    homogeneity = [quasi_homogeneity_defect(pt) for pt in points]
    not_flat = [unit_flatness_defect(pt) for pt in points]
    return [
        upper_bound(name, brackets, ctx.tol(name, 1e-10)),
        upper_bound(FROBENIUS.qualified("quasi_homogeneity"), homogeneity,
                    ctx.tol(FROBENIUS.qualified("quasi_homogeneity"), 1e-9)),
        lower_bound(FROBENIUS.qualified("unit_not_flat"), not_flat, 0.01),
    ]


@FROBENIUS.check("canonical")
def canonical(ctx: SuiteContext):
    name = FROBENIUS.qualified("canonical")
    points = _points(ctx, name)
    idem = [max(idempotent_defect(pt), unit_in_canonical_defect(pt)) for pt in points]
    symmetric = []
    for pt in points:
        t1, _ = pt.t
        u = canonical_coords(pt)
        symmetric.append(max(_rel(u.u1 + u.u2, 2 * (pt.b + t1)), _rel(u.u1 * u.u2, pt.a ** 2)))
    return [
        upper_bound(name, idem, ctx.tol(name, 1e-10)),
        upper_bound(FROBENIUS.qualified("canonical_symmetric"), symmetric, ctx.tol(name, 1e-12)),
    ]


# ---------------- INTERSECTION FORM ----------------

@FROBENIUS.check("intersection_form")
def intersection(ctx: SuiteContext):
    name = FROBENIUS.qualified("intersection_form")
    points = _points(ctx, name)
    routes = [intersection_route_gap(pt) for pt in points]
    closed, second, det = [], [], []
    two = second_bracket()
    for pt in points:
        t1, t2 = pt.t
        g = intersection_form(pt, tol=np.inf)
        closed.append(_rel(g, intersection_closed(pt)))
        second.append(_rel(g, two.metric(t1, t2)))
        det.append(_rel(np.linalg.det(intersection_closed(pt)), -pt.a ** 2))
    return [
        upper_bound(name, routes, ctx.tol(name, 1e-10)),
        upper_bound(FROBENIUS.qualified("intersection_closed_form"), closed, ctx.tol(name, 1e-10)),
        upper_bound(FROBENIUS.qualified("intersection_second_metric"), second, ctx.tol(name, 1e-10)),
        upper_bound(FROBENIUS.qualified("intersection_determinant"), det, 1e-12),
    ]


# ---------------- BRACKETS AND RECURSIONS ----------------

@FROBENIUS.check("gamma_symmetry")
def gamma_symmetry(ctx: SuiteContext):
    name = FROBENIUS.qualified("gamma_symmetry")
    two = second_bracket()
    residuals = [gamma_symmetry_defect(two, pt) for pt in _points(ctx, name)]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-12))]


@FROBENIUS.check("recursion")
def recursion(ctx: SuiteContext):
    name = FROBENIUS.qualified("recursion")
    residuals = []
    for pt in _points(ctx, name, min(ctx.points, 50)):
        for n in range(1, RECURSION_MAX + 1):
            residuals += list(recursion_check(n, pt).values())
    return [upper_bound(name, residuals, ctx.tol(name, 1e-10))]


@FROBENIUS.check("levelt")
def levelt(ctx: SuiteContext):
    name = FROBENIUS.qualified("levelt")
    residuals = []
    for pt in _points(ctx, name, min(ctx.points, 50)):
        for p in range(LEVELT_MAX_P + 1):
            residuals += list(levelt_residuals(p, pt).values())
    return [upper_bound(name, residuals, ctx.tol(name, 1e-8))]


@FROBENIUS.check("pencil_flatness")
def pencil(ctx: SuiteContext):
    name = FROBENIUS.qualified("pencil_flatness")
    points = _points(ctx, name, PENCIL_POINTS)
    curvature = [r for pt in points for r in pencil_flatness(pt, PENCIL_LAMBDAS).values()]
    exact = [unit_exactness_defect(pt) for pt in points]
    return [
        upper_bound(name, curvature, ctx.tol(name, 1e-6)),
        lower_bound(FROBENIUS.qualified("pencil_not_exact"), exact, 0.05),
    ]


# ---------------- THETA SERIES ----------------

@FROBENIUS.check("psi2")
def psi2(ctx: SuiteContext):
    name = FROBENIUS.qualified("psi2")
    series = [theta_series(2, MAX_P, pt, tol=np.inf) for pt in random_vw_points(ctx.rng(name), ctx.points)]
    return [
        upper_bound(name, [s.route_gap for s in series], ctx.tol(name, 1e-10)),
        record(FROBENIUS.qualified("psi2_printed_form"), [s.printed_gap for s in series]),
    ]


@FROBENIUS.check("theta_recursion")
def theta_recursion(ctx: SuiteContext):
    name = FROBENIUS.qualified("theta_recursion")
    residuals = []
    for pt in _points(ctx, name, min(ctx.points, 50)):
        residuals += [theta_recursion_residual(1, p, pt) for p in range(THETA1_MAX_P)]
        residuals += [theta_recursion_residual(2, p, pt) for p in range(LEVELT_MAX_P + 1)]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-8))]


@FROBENIUS.check("momentum")
def momentum(ctx: SuiteContext):
    """t1 t2 is not a stored theta up to scale and affine terms."""
    name = FROBENIUS.qualified("momentum")
    distances = momentum_distance(momentum_points())
    closest = min(distances, key=distances.get)
    return [lower_bound(name, distances.values(), 0.1, detail=f"closest {closest}")]
