from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np

from guards.kill_switch import NumericalKillSwitch
from utils.errors import ConfigError
from utils.logger import get_logger

log = get_logger("simulation")


@dataclass
class Snapshot:
    step: int
    time: float
    state: object


@dataclass
class IntegrationResult:
    final: object
    snapshots: List[Snapshot]
    curves: Dict[str, List[complex]]
    times: List[float]
    halted: bool = False
    reason: str | None = None


def rk4_step(rhs: Callable, state, dt: float):
    """Classical explicit fourth-order step. `rhs(state)` returns the flat derivative."""
    z = state.flat()
    t = state.time
    k1 = rhs(state)
    k2 = rhs(state.from_flat(z + 0.5 * dt * k1, t + 0.5 * dt))
    k3 = rhs(state.from_flat(z + 0.5 * dt * k2, t + 0.5 * dt))
    k4 = rhs(state.from_flat(z + dt * k3, t + dt))
    return state.from_flat(z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), t + dt)


class IntegrationEngine:
    def __init__(
        self,
        rhs: Callable,
        dt: float,
        *,
        monitors: Dict[str, Callable] | None = None,   # conserved quantities to track
        guard: Callable | None = None,                 # state -> (reason, error) or None
        record_every: int = 1,
        keep_snapshots: bool = True,
        kill_switch: NumericalKillSwitch | None = None,
    ):
        if dt <= 0:
            raise ValueError(f"dt must be > 0, got {dt}")
        self.rhs = rhs
        self.dt = dt
        self.monitors = monitors or {}
        self.guard = guard
        self.record_every = max(1, int(record_every))
        self.keep_snapshots = keep_snapshots
        self.kill_switch = kill_switch or NumericalKillSwitch()

        # State
        self.snapshots: List[Snapshot] = []
        self.curves: Dict[str, List[complex]] = {name: [] for name in self.monitors}
        self.times: List[float] = []

    # ---------- Utilities ----------

    def _record(self, step: int, state):
        if self.keep_snapshots:
            self.snapshots.append(Snapshot(step=step, time=state.time, state=state))
        self.times.append(state.time)
        for name, fn in self.monitors.items():
            self.curves[name].append(complex(fn(state)))

    def _inspect(self, step: int, state) -> bool:
        if self.guard is None:
            return True
        verdict = self.guard(state)
        if verdict is None:
            return True
        reason, error = verdict
        self.kill_switch.trigger(reason, time=state.time, step=step, error=error)
        return False

    # ---------- Main loop ----------

    def run(self, state, t_final: float) -> IntegrationResult:
        span = t_final - state.time
        steps = int(round(span / self.dt))
        if abs(steps * self.dt - span) > 1e-9 * max(abs(span), self.dt):
            raise ConfigError(f"dt={self.dt:g} does not divide the span {span:g} to t={t_final:g}")
        log.info("integrating %d steps of dt=%g to t=%g", steps, self.dt, t_final)

        self._record(0, state)
        if not self._inspect(0, state):
            return self._result(state)

        for step in range(1, steps + 1):
            state = rk4_step(self.rhs, state, self.dt)

            if not self._inspect(step, state):
                log.warning("halted at step %d: %s", step, self.kill_switch.reason())
                self._record(step, state)
                break

            if step % self.record_every == 0 or step == steps:
                self._record(step, state)

        return self._result(state)

    def _result(self, state) -> IntegrationResult:
        return IntegrationResult(
            final=state,
            snapshots=self.snapshots,
            curves=self.curves,
            times=self.times,
            halted=self.kill_switch.is_active(),
            reason=self.kill_switch.reason(),
        )


def flat_rhs(pair_rhs: Callable) -> Callable:
    """Wrap a (dx, dy)-valued vector field as a flat one."""
    def rhs(state):
        dx, dy = pair_rhs(state)
        return np.concatenate([dx, dy])
    return rhs
