"""
Structural properties of the lattice flows that are not identities of a single
operation: gradient accuracy, Poisson commutativity, gauge covariance of the
factor flows, the symplectic form, invariance of the Toeplitz shape and the
order of the time stepper.
"""
import numpy as np

from lattice.flows import AL_FLOW, flow_rhs, matrix_flow_rhs
from lattice.hamiltonians import hamiltonian, hamiltonian_gradient
from lattice.matrices import (
    StructuredMatrix,
    ab_arrays,
    build_lax,
    lax_arrays,
    lower_part,
    upper_part,
)
from lattice.state import LatticeState, Periodic
from simulation.engine import flat_rhs, rk4_step
from simulation.metrics import order_estimate


# ---------------- HAMILTONIANS ----------------

def gradient_fd_gap(k: int, i: int, s: LatticeState, h: float = 1e-6) -> float:
    """Relative gap between the trace-identity gradient and central differences."""
    if not isinstance(s.boundary, Periodic):
        raise ValueError("finite-difference gradients need a periodic state")
    gx, gy = hamiltonian_gradient(k, i, s)
    fd_x = np.empty(s.size, dtype=complex)
    fd_y = np.empty(s.size, dtype=complex)
    for n in range(s.size):
        step = np.zeros(s.size)
        step[n] = h
        fd_x[n] = (hamiltonian(k, i, s.with_values(s.x + step, s.y))
                   - hamiltonian(k, i, s.with_values(s.x - step, s.y))) / (2 * h)
        fd_y[n] = (hamiltonian(k, i, s.with_values(s.x, s.y + step))
                   - hamiltonian(k, i, s.with_values(s.x, s.y - step))) / (2 * h)
    scale = max(1e-300, float(np.max(np.abs(np.concatenate([gx, gy])))))
    gap = max(float(np.max(np.abs(gx - fd_x))), float(np.max(np.abs(gy - fd_y))))
    return gap / scale


def poisson_bracket(first, second, s: LatticeState) -> complex:
    """{H_a, H_b} = sum_n v_n (dH_a/dx_n dH_b/dy_n - dH_a/dy_n dH_b/dx_n)."""
    ax, ay = hamiltonian_gradient(*first, s)
    bx, by = hamiltonian_gradient(*second, s)
    return complex(np.sum(s.v * (ax * by - ay * bx)))


# ---------------- GAUGE ----------------

def gauge_covariance_defect(s: LatticeState, c: complex, flow=(1, 1), buffer: int = 4) -> float:
    """
    Rescale y -> c y, x -> x / c and compare A, B and the factor-flow outputs.
    Both only see the ratios y_n / y_(n+1) and the products x_n y_n.
    """
    moved = s.with_values(s.x / c, s.y * c)
    x0, y0 = s.unrolled(buffer + flow[1] + 2) if s.is_periodic else (s.x, s.y)
    x1, y1 = moved.unrolled(buffer + flow[1] + 2) if moved.is_periodic else (moved.x, moved.y)
    a0, b0 = ab_arrays(x0, y0)
    a1, b1 = ab_arrays(x1, y1)
    d0 = matrix_flow_rhs(flow, StructuredMatrix(a0, "A"), StructuredMatrix(b0, "B"), buffer)
    d1 = matrix_flow_rhs(flow, StructuredMatrix(a1, "A"), StructuredMatrix(b1, "B"), buffer)
    return max(
        float(np.max(np.abs(a0 - a1))),
        float(np.max(np.abs(b0 - b1))),
        float(np.max(np.abs(d0[0].entries - d1[0].entries))),
        float(np.max(np.abs(d0[1].entries - d1[1].entries))),
    )


# ---------------- SYMPLECTIC FORM ----------------

def symplectic_matrix(s: LatticeState) -> np.ndarray:
    """omega = sum_n dx_n ^ dy_n / (1 - x_n y_n) in the coordinates (x_1..x_N, y_1..y_N)."""
    n = s.size
    omega = np.zeros((2 * n, 2 * n), dtype=complex)
    inv_v = 1.0 / s.v
    omega[np.arange(n), n + np.arange(n)] = inv_v
    omega[n + np.arange(n), np.arange(n)] = -inv_v
    return omega


def symplectic_defect(s: LatticeState, dt: float, flow=AL_FLOW, h: float = 1e-6) -> float:
    """max |J^T omega(step(s)) J - omega(s)| for the Jacobian J of one RK4 step."""
    rhs = flat_rhs(lambda st: flow_rhs(flow, st))
    z = s.flat()
    dim = z.size
    jac = np.empty((dim, dim), dtype=complex)
    for col in range(dim):
        e = np.zeros(dim)
        e[col] = h
        plus = rk4_step(rhs, s.from_flat(z + e, s.time), dt).flat()
        minus = rk4_step(rhs, s.from_flat(z - e, s.time), dt).flat()
        jac[:, col] = (plus - minus) / (2 * h)
    stepped = rk4_step(rhs, s, dt)
    pulled = jac.T @ symplectic_matrix(stepped) @ jac
    return float(np.max(np.abs(pulled - symplectic_matrix(s))))


# ---------------- TOEPLITZ SHAPE ----------------

def _lax_generator(flow, l1: np.ndarray, l2: np.ndarray) -> np.ndarray:
    k, i = flow
    if (k, i) == AL_FLOW:
        return 0.5 * (upper_part(l1) + lower_part(l2))
    if k == 1:
        return upper_part(np.linalg.matrix_power(l1, i))
    return lower_part(np.linalg.matrix_power(l2, i))


def toeplitz_shape_gap(s: LatticeState, flow, dt: float, margin: int = 6) -> float:
    """
    |L1(step(s)) - (L1 + dt [M, L1])| on the inner block, where M generates the
    flow on L1. The Lax matrix of the stepped state keeps the Toeplitz form, so
    the gap is the O(dt^2) Euler defect.
    """
    flow = tuple(flow)
    if s.is_periodic:
        raise ValueError("Toeplitz shape check runs on windows")
    rhs = flat_rhs(lambda st: flow_rhs(flow, st))
    l1, _ = build_lax(s)
    _, l2, _ = lax_arrays(s.x, s.y)
    m = _lax_generator(flow, l1.entries, l2)
    euler = l1.entries + dt * (m @ l1.entries - l1.entries @ m)
    stepped, _ = build_lax(rk4_step(rhs, s, dt))
    dim = euler.shape[0]
    block = slice(margin, dim - margin)
    if block.start >= block.stop:
        raise ValueError(f"{s.size} sites leave no block at margin {margin}")
    return float(np.max(np.abs((stepped.entries - euler)[block, block])))


def toeplitz_shape_order(s: LatticeState, flow, dt: float = 1e-2) -> dict:
    """Gap constant C = gap / dt^2 and the observed order under step halving (expected 2)."""
    gaps = [toeplitz_shape_gap(s, flow, dt), toeplitz_shape_gap(s, flow, dt / 2)]
    return {"constant": gaps[0] / dt ** 2, "order": order_estimate(gaps)}


# ---------------- TIME STEPPER ----------------

def step_halving_order(s: LatticeState, flow=AL_FLOW, t_final: float = 1.0, dt: float = 0.1) -> float:
    """Observed order of the fixed-step scheme from three runs at dt, dt/2, dt/4."""
    rhs = flat_rhs(lambda st: flow_rhs(flow, st))
    finals = []
    for level in range(3):
        step = dt / 2 ** level
        state = s
        for _ in range(int(round(t_final / step))):
            state = rk4_step(rhs, state, step)
        finals.append(state.flat())
    errors = [float(np.max(np.abs(finals[0] - finals[1]))),
              float(np.max(np.abs(finals[1] - finals[2])))]
    return order_estimate(errors)
