import math
from typing import Callable

import numpy as np

from hydro.field import HydroField
from hydro.flows import flow_rhs, max_characteristic_speed
from simulation.engine import IntegrationEngine, IntegrationResult
from utils.errors import BlowUp, GradientCatastrophe
from utils.logger import get_logger

log = get_logger("hydro.pde")

# ---------------- CONFIG ----------------
CFL = 0.2
MAX_GRADIENT = 1e3


def field_monitors():
    """Three conserved integrals: the Casimir t1 of the first bracket, t2, and H1_2."""
    return {
        "int_t1": lambda f: f.integral(f.t1),
        "int_t2": lambda f: f.integral(f.t2),
        "int_h1_2": lambda f: f.integral(0.5 * f.t1 ** 2 + f.t1 * f.b),
    }


def gradient_guard(max_gradient: float = MAX_GRADIENT):
    def guard(f: HydroField):
        if not (np.isfinite(f.v).all() and np.isfinite(f.w).all()):
            return "non-finite field values", BlowUp
        steep = max(float(np.max(np.abs(f.ddx(f.v)))), float(np.max(np.abs(f.ddx(f.w)))))
        if steep > max_gradient:
            return f"max |d/dx (v, w)| = {steep:.3e}", GradientCatastrophe
        return None
    return guard


def cfl_step(flow, f: HydroField, t_final: float, cfl: float = CFL) -> float:
    """Largest dt allowed by the CFL factor, shrunk so the steps land on t_final."""
    speed = max_characteristic_speed(flow, f)
    dt = cfl * f.dx / speed if speed > 0 else t_final
    steps = max(1, math.ceil(t_final / dt - 1e-12))
    return t_final / steps


def pde_integrate(
    f: HydroField,
    flow=(1, 1),
    t_final: float = 0.1,
    dt: float | None = None,
    *,
    cfl: float = CFL,
    max_gradient: float = MAX_GRADIENT,
    record_every: int = 1,
    check: bool = False,
    flush: Callable[[IntegrationResult], None] | None = None,
) -> IntegrationResult:
    """
    Method of lines with RK4 in time. dt defaults to the CFL bound of the
    initial data. Raises GradientCatastrophe once the profile starts to break.
    """
    flow = tuple(flow)
    span = t_final - f.time
    if dt is None:
        dt = cfl_step(flow, f, span, cfl) if span > 0 else 1.0
    log.info("hydro flow %s on %d points, dt=%g", flow, f.size, dt)

    engine = IntegrationEngine(
        flow_rhs(flow, check=check),
        dt,
        monitors=field_monitors(),
        guard=gradient_guard(max_gradient),
        record_every=record_every,
    )
    result = engine.run(f, t_final)
    if result.halted:
        if flush is not None:
            flush(result)
        engine.kill_switch.raise_if_active()
    return result
