from typing import Callable, Iterable

import numpy as np

from lattice.flows import AL_FLOW, flow_rhs
from lattice.hamiltonians import al_hamiltonian, hamiltonian
from lattice.state import BLOWUP_EPS, LatticeState
from simulation.engine import IntegrationEngine, IntegrationResult, flat_rhs
from utils.errors import BlowUp


def monitor_name(k: int, i: int) -> str:
    return "H_AL" if (k, i) == AL_FLOW else f"H{k}_{i}"


def lattice_guard(state: LatticeState):
    x, y = state.x, state.y
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        return "non-finite lattice values", BlowUp
    worst = float(np.min(np.abs(1.0 - x * y)))
    if worst < BLOWUP_EPS:
        return f"|1 - x y| = {worst:.3e}", BlowUp
    return None


def conserved_monitors(conserved: Iterable, include_al: bool = True):
    monitors = {}
    if include_al:
        monitors["H_AL"] = al_hamiltonian
    for k, i in conserved:
        monitors[monitor_name(k, i)] = (lambda s, k=k, i=i: hamiltonian(k, i, s))
    return monitors


def integrate(
    s: LatticeState,
    flow=AL_FLOW,
    t_final: float = 1.0,
    dt: float = 1e-3,
    *,
    conserved: Iterable = (),
    record_every: int = 1,
    keep_snapshots: bool = True,
    flush: Callable[[IntegrationResult], None] | None = None,
) -> IntegrationResult:
    """
    Fixed-step RK4 along `flow` ((0, 1) for Ablowitz-Ladik, (k, i) for H(k)_i).
    Conserved quantities are recorded at every recorded step. On blow-up the
    partial result is handed to `flush` before BlowUp is raised.
    """
    flow = tuple(flow)
    engine = IntegrationEngine(
        flat_rhs(lambda st: flow_rhs(flow, st)),
        dt,
        monitors=conserved_monitors(conserved, include_al=s.is_periodic),
        guard=lattice_guard,
        record_every=record_every,
        keep_snapshots=keep_snapshots,
    )
    result = engine.run(s, t_final)
    if result.halted:
        if flush is not None:
            flush(result)
        engine.kill_switch.raise_if_active()
    return result
