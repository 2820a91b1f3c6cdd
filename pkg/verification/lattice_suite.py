"""
Lattice checks: the AL flow as the sum of the two factor flows, the A/B
factorization, the matrix flows against the Hamiltonian flows, conservation
under time stepping and the semi-infinite constraint.
"""
import numpy as np

from lattice.flows import AL_FLOW, al_rhs, ham_flow_rhs, matrix_flow_invariant_rates
from lattice.hamiltonians import hamiltonian, hamiltonian_gradient
from lattice.integrator import integrate
from lattice.matrices import dressing_check, factorization_residuals
from lattice.properties import (
    gauge_covariance_defect,
    gradient_fd_gap,
    poisson_bracket,
    step_halving_order,
    symplectic_defect,
    toeplitz_shape_order,
)
from lattice.semi_infinite import semi_infinite_constraint
from lattice.state import Periodic, SemiInfinite, Window, generic_state, nonzero_y_state, random_state
from simulation.metrics import compute_drift
from verification.context import Suite, SuiteContext
from verification.report import lower_bound, record, upper_bound

LATTICE = Suite("lattice")

# ---------------- CONFIG ----------------
FACTOR_WINDOWS = 20
MATRIX_FLOW_MAX_I = 3
CONSERVED_MAX_I = 4
SEMI_INFINITE_SITES = 20
HAMILTONIAN_FLOWS = ((1, 1), (2, 1), (1, 2), (2, 2), (1, 3))
FLOW_CONSERVATION_SITES = 16
FLOW_CONSERVATION_TIME = 0.5


def _amplitude(ctx: SuiteContext) -> float:
    return float(ctx.section("lattice").get("amplitude", 0.2))


def _max_abs(*arrays) -> float:
    return max(float(np.max(np.abs(a))) for a in arrays)


# ---------------- FLOWS ----------------

@LATTICE.check("al_equivalence")
def al_equivalence(ctx: SuiteContext):
    name = LATTICE.qualified("al_equivalence")
    rng = ctx.rng(name)
    residuals = []
    for _ in range(ctx.points):
        s = random_state(rng, Periodic(int(rng.integers(6, 17))), _amplitude(ctx))
        dx, dy = al_rhs(s)
        x1, y1 = ham_flow_rhs(1, 1, s)
        x2, y2 = ham_flow_rhs(2, 1, s)
        residuals.append(_max_abs(dx - 0.5 * (x1 + x2), dy - 0.5 * (y1 + y2)))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-12))]


@LATTICE.check("hamiltonian_closed_forms")
def hamiltonian_closed_forms(ctx: SuiteContext):
    """H(1)_1 = sum x_(n+1) y_n and H(2)_1 = sum x_n y_(n+1)."""
    name = LATTICE.qualified("hamiltonian_closed_forms")
    rng = ctx.rng(name)
    residuals = []
    for _ in range(10):
        s = random_state(rng, Periodic(12), _amplitude(ctx))
        closed_1 = np.sum(np.roll(s.x, -1) * s.y)
        closed_2 = np.sum(s.x * np.roll(s.y, -1))
        residuals.append(max(abs(hamiltonian(1, 1, s) - closed_1), abs(hamiltonian(2, 1, s) - closed_2)))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-13))]


@LATTICE.check("gradient_fd")
def gradient_fd(ctx: SuiteContext):
    name = LATTICE.qualified("gradient_fd")
    rng = ctx.rng(name)
    residuals = []
    for _ in range(3):
        s = random_state(rng, Periodic(6), _amplitude(ctx))
        residuals += [gradient_fd_gap(k, i, s) for k in (1, 2) for i in (1, 2, 3)]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-7))]


@LATTICE.check("poisson_commutativity")
def poisson_commutativity(ctx: SuiteContext):
    name = LATTICE.qualified("poisson_commutativity")
    rng = ctx.rng(name)
    flows = [(1, 1), (2, 1), (1, 2), (2, 2), (1, 3)]
    residuals = []
    for _ in range(5):
        s = random_state(rng, Periodic(10), _amplitude(ctx))
        for j, first in enumerate(flows):
            for second in flows[j + 1:]:
                ax, ay = hamiltonian_gradient(*first, s)
                bx, by = hamiltonian_gradient(*second, s)
                scale = float(np.sum(np.abs(s.v) * (np.abs(ax * by) + np.abs(ay * bx))))
                residuals.append(abs(poisson_bracket(first, second, s)) / max(scale, 1e-300))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-12))]


# ---------------- FACTORIZATION ----------------

@LATTICE.check("factorization")
def factorization(ctx: SuiteContext):
    name = LATTICE.qualified("factorization")
    rng = ctx.rng(name)
    residuals = []
    for _ in range(FACTOR_WINDOWS):
        size = int(rng.integers(16, 25))
        s = nonzero_y_state(rng, Window(0, size, 4), _amplitude(ctx))
        r1, r2 = factorization_residuals(s, buffer=4)
        residuals.append(max(r1, r2))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-12))]


@LATTICE.check("dressing")
def dressing(ctx: SuiteContext):
    name = LATTICE.qualified("dressing")
    rng = ctx.rng(name)
    residuals = [dressing_check(nonzero_y_state(rng, Window(0, 16, 4), _amplitude(ctx)))
                 for _ in range(FACTOR_WINDOWS)]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-12))]


@LATTICE.check("gauge_covariance")
def gauge_covariance(ctx: SuiteContext):
    name = LATTICE.qualified("gauge_covariance")
    rng = ctx.rng(name)
    residuals = []
    for _ in range(10):
        s = nonzero_y_state(rng, Window(0, 20, 4), _amplitude(ctx))
        c = rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        residuals += [gauge_covariance_defect(s, c, flow) for flow in ((1, 1), (2, 1), (1, 2))]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-12))]


@LATTICE.check("matrix_flow")
def matrix_flow(ctx: SuiteContext):
    name = LATTICE.qualified("matrix_flow")
    rng = ctx.rng(name)
    residuals = []
    for _ in range(5):
        s = nonzero_y_state(rng, Periodic(8), _amplitude(ctx))
        for k in (1, 2):
            for i in range(1, MATRIX_FLOW_MAX_I + 1):
                rates = matrix_flow_invariant_rates((k, i), s, buffer=4)
                residuals.append(_max_abs(rates["matrix_diag"] - rates["hamilton_diag"],
                                          rates["matrix_next"] - rates["hamilton_next"]))
    return [upper_bound(name, residuals, ctx.tol(name, 1e-10))]


@LATTICE.check("toeplitz_shape")
def toeplitz_shape(ctx: SuiteContext):
    """The stepped Lax matrix stays Toeplitz-shaped: the Euler gap falls off as dt^2."""
    name = LATTICE.qualified("toeplitz_shape")
    rng = ctx.rng(name)
    s = random_state(rng, Window(0, 24, 4), _amplitude(ctx))
    orders, constants = [], []
    for flow in (AL_FLOW, (1, 1), (2, 1)):
        fit = toeplitz_shape_order(s, flow)
        orders.append(abs(fit["order"] - 2.0))
        constants.append(fit["constant"])
    return [
        upper_bound(name, orders, ctx.tol(name, 0.5), detail="|observed order - 2|"),
        record(LATTICE.qualified("toeplitz_shape_constant"), constants),
    ]


# ---------------- TIME STEPPING ----------------

@LATTICE.check("conservation")
def conservation(ctx: SuiteContext):
    name = LATTICE.qualified("conservation")
    rng = ctx.rng(name)
    cfg = ctx.section("lattice")
    s = random_state(rng, Periodic(64), _amplitude(ctx))
    conserved = [(k, i) for k in (1, 2) for i in range(1, CONSERVED_MAX_I + 1)]
    result = integrate(s, AL_FLOW, 1.0, float(cfg.get("dt", 1e-3)),
                       conserved=conserved, record_every=10, keep_snapshots=False)
    drift = compute_drift(result.curves)
    worst = max(drift, key=lambda k: drift[k]["max_rel_drift"])
    return [upper_bound(name, [d["max_rel_drift"] for d in drift.values()],
                        ctx.tol(name, 1e-8), detail=f"worst monitor {worst}")]


@LATTICE.check("conservation_flows")
def conservation_flows(ctx: SuiteContext):
    """H(k)_i, i <= 4, along the Hamiltonian flows themselves on a short periodic chain."""
    name = LATTICE.qualified("conservation_flows")
    rng = ctx.rng(name)
    cfg = ctx.section("lattice")
    conserved = [(k, i) for k in (1, 2) for i in range(1, CONSERVED_MAX_I + 1)]
    drifts = {}
    for flow in HAMILTONIAN_FLOWS:
        s = random_state(rng, Periodic(FLOW_CONSERVATION_SITES), _amplitude(ctx))
        result = integrate(s, flow, FLOW_CONSERVATION_TIME, float(cfg.get("dt", 1e-3)),
                           conserved=conserved, record_every=10, keep_snapshots=False)
        drifts[flow] = max(d["max_rel_drift"] for d in compute_drift(result.curves).values())
    worst = max(drifts, key=drifts.get)
    return [upper_bound(name, list(drifts.values()), ctx.tol(name, 1e-8), detail=f"worst flow {worst}")]


@LATTICE.check("rk4_order")
def rk4_order(ctx: SuiteContext):
    name = LATTICE.qualified("rk4_order")
    rng = ctx.rng(name)
    s = random_state(rng, Periodic(16), 0.5)
    order = step_halving_order(s)
    return [upper_bound(name, [abs(order - 4.0)], ctx.tol(name, 0.5), detail=f"observed order {order:.3f}")]


@LATTICE.check("symplectic")
def symplectic(ctx: SuiteContext):
    name = LATTICE.qualified("symplectic")
    rng = ctx.rng(name)
    residuals = [symplectic_defect(random_state(rng, Periodic(2), 0.3, real=True), 0.01) for _ in range(5)]
    return [upper_bound(name, residuals, ctx.tol(name, 1e-7))]


# ---------------- SEMI-INFINITE ----------------

@LATTICE.check("semi_infinite")
def semi_infinite(ctx: SuiteContext):
    name = LATTICE.qualified("semi_infinite")
    rng = ctx.rng(name)
    reports = [semi_infinite_constraint(nonzero_y_state(rng, SemiInfinite(SEMI_INFINITE_SITES), _amplitude(ctx)))
               for _ in range(10)]

    # x_0 y_0 = 1 switches the correction off
    unit = nonzero_y_state(rng, SemiInfinite(SEMI_INFINITE_SITES), _amplitude(ctx))
    x = unit.x.copy()
    x[0] = 1.0 / unit.y[0]
    unit_report = semi_infinite_constraint(unit.with_values(x, unit.y))

    # L1 L2 - 1 = L1 E is of size |x v_0 y| on the half line
    controls = [semi_infinite_constraint(generic_state(rng, SemiInfinite(SEMI_INFINITE_SITES))).uncorrected
                for _ in range(10)]

    return [
        upper_bound(name, [r.constraint for r in reports], ctx.tol(name, 1e-12)),
        upper_bound(LATTICE.qualified("semi_infinite_factorization"),
                    [r.factorization for r in reports], ctx.tol(name, 1e-12)),
        upper_bound(LATTICE.qualified("semi_infinite_left_inverse"),
                    [r.left_inverse for r in reports], ctx.tol(name, 1e-12)),
        lower_bound(LATTICE.qualified("semi_infinite_uncorrected"),
                    controls, 0.1),
        upper_bound(LATTICE.qualified("semi_infinite_unit_corner"),
                    [unit_report.uncorrected, unit_report.correction_norm], ctx.tol(name, 1e-12)),
    ]
