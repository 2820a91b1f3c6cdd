import numpy as np

from lattice.hamiltonians import exact_region, hamiltonian_gradient
from lattice.matrices import (
    StructuredMatrix,
    ab_arrays,
    inverse_a,
    inverse_b,
    lower_part,
    upper_part,
)
from lattice.state import LatticeState, Periodic, SemiInfinite
from utils.errors import ShapeViolation, WindowTooSmall

AL_FLOW = (0, 1)
SHAPE_TOL = 1e-10


# ---------------- VECTOR FIELDS ----------------

def al_rhs(s: LatticeState):
    """x'_n = (1/2) v_n (x_{n-1} + x_{n+1}),  y'_n = -(1/2) v_n (y_{n-1} + y_{n+1})."""
    x, y, v = s.x, s.y, s.v
    if isinstance(s.boundary, Periodic):
        dx = 0.5 * v * (np.roll(x, 1) + np.roll(x, -1))
        dy = -0.5 * v * (np.roll(y, 1) + np.roll(y, -1))
        return dx, dy

    dx = np.zeros_like(x)
    dy = np.zeros_like(y)
    dx[1:-1] = 0.5 * v[1:-1] * (x[:-2] + x[2:])
    dy[1:-1] = -0.5 * v[1:-1] * (y[:-2] + y[2:])
    if isinstance(s.boundary, SemiInfinite):
        # nothing to the left of site 0
        dx[0] = 0.5 * v[0] * x[1]
        dy[0] = -0.5 * v[0] * y[1]
    return dx, dy


def ham_flow_rhs(k: int, i: int, s: LatticeState):
    """x'_n = v_n dH/dy_n, y'_n = -v_n dH/dx_n for H = H(k)_i."""
    gx, gy = hamiltonian_gradient(k, i, s)
    return s.v * gy, -s.v * gx


def flow_rhs(flow, s: LatticeState):
    k, i = flow
    if (k, i) == AL_FLOW:
        return al_rhs(s)
    return ham_flow_rhs(k, i, s)


def flow_radius(flow) -> int:
    k, i = flow
    return 1 if (k, i) == AL_FLOW else i + 1


# ---------------- MATRIX FLOWS ----------------

def _assert_band(m: np.ndarray, offset: int, region: slice, what: str):
    dim = m.shape[0]
    rows = np.arange(dim)[region]
    cols = np.arange(dim)[region]
    block = m[np.ix_(rows, cols)]
    mask = (cols[None, :] - rows[:, None]) != offset
    bad = float(np.abs(block[mask]).max(initial=0.0))
    if bad > SHAPE_TOL:
        raise ShapeViolation(f"{what} leaves its band by {bad:.3e}")
    return bad


def matrix_flow_rhs(kind, mat_a: StructuredMatrix, mat_b: StructuredMatrix, buffer: int):
    """
    Flow (1, i):  A' = (L1^i)_+ A - A ((B^-1 A)^i)_+,  B' = (L1^i)_+ B - B ((B^-1 A)^i)_+
    Flow (2, i):  A' = (L2^i)_- A - A ((A^-1 B)^i)_-,  B' = (L2^i)_- B - B ((A^-1 B)^i)_-

    On the interior A' must stay diagonal and B' subdiagonal.
    """
    k, i = kind
    if buffer < i + 1:
        raise WindowTooSmall(f"matrix flow of order {i} needs buffer >= {i + 1}")
    a, b = mat_a.entries, mat_b.entries
    dim = a.shape[0]
    if dim <= 2 * buffer:
        raise WindowTooSmall(f"{dim} rows leave no interior at buffer {buffer}")

    b_inv = inverse_b(b)
    a_inv = inverse_a(a)
    if k == 1:
        left = upper_part(np.linalg.matrix_power(a @ b_inv, i))
        right = upper_part(np.linalg.matrix_power(b_inv @ a, i))
    elif k == 2:
        left = lower_part(np.linalg.matrix_power(b @ a_inv, i))
        right = lower_part(np.linalg.matrix_power(a_inv @ b, i))
    else:
        raise ValueError(f"no matrix flow family {k}")

    d_a = left @ a - a @ right
    d_b = left @ b - b @ right

    region = slice(buffer, dim - buffer)
    _assert_band(d_a, 0, region, "dA")
    _assert_band(d_b, -1, region, "dB")

    return (
        StructuredMatrix(d_a, kind="generic", n_min=mat_a.n_min, locality=i),
        StructuredMatrix(d_b, kind="generic", n_min=mat_b.n_min, locality=i),
    )


# ---------------- GAUGE INVARIANTS ----------------

def invariants(s: LatticeState):
    """(x_n y_n, x_{n+1} y_n) per site; the second array is one shorter."""
    return s.x * s.y, s.x[1:] * s.y[:-1]


def invariant_rates_from_state(s: LatticeState, dx: np.ndarray, dy: np.ndarray):
    rate_diag = dx * s.y + s.x * dy
    rate_next = dx[1:] * s.y[:-1] + s.x[1:] * dy[:-1]
    return rate_diag, rate_next


def invariant_rates_from_factors(a: np.ndarray, b: np.ndarray, d_a: np.ndarray, d_b: np.ndarray):
    """
    Using x_{n+1} y_n = b_{n+1} - a_n and x_n y_n = 1 - b_n / a_{n-1}.
    Arrays are indexed by matrix row; entry 0 of the first result is undefined (nan).
    """
    dim = a.size
    da, db = d_a, d_b
    rate_next = np.full(dim, np.nan, dtype=complex)
    rate_next[: dim - 1] = db[1:] - da[: dim - 1]
    rate_diag = np.full(dim, np.nan, dtype=complex)
    rate_diag[1:] = -(db[1:] * a[:-1] - b[1:] * da[:-1]) / a[:-1] ** 2
    return rate_diag, rate_next


def matrix_flow_invariant_rates(flow, s: LatticeState, buffer: int):
    """
    Rates of x_n y_n and x_{n+1} y_n implied by the matrix flow, on the
    window's interior, returned next to the Hamiltonian-flow rates.
    """
    k, i = flow
    x, y = s.x, s.y
    if isinstance(s.boundary, Periodic):
        x, y = s.unrolled(buffer + i + 2)
        offset = buffer + i + 2
    else:
        offset = 0
    a, b = ab_arrays(x, y)
    mat_a = StructuredMatrix(a, kind="A")
    mat_b = StructuredMatrix(b, kind="B")
    d_a, d_b = matrix_flow_rhs(flow, mat_a, mat_b, buffer)

    diag_a = np.diagonal(a).copy()
    sub_b = np.concatenate([[0.0], np.diagonal(b, -1)])
    rate_diag, rate_next = invariant_rates_from_factors(
        diag_a, sub_b, np.diagonal(d_a.entries).copy(),
        np.concatenate([[0.0], np.diagonal(d_b.entries, -1)]),
    )

    dx, dy = ham_flow_rhs(k, i, s)
    ham_diag, ham_next = invariant_rates_from_state(s, dx, dy)

    dim = a.shape[0]
    if isinstance(s.boundary, Periodic):
        rows = np.arange(offset, offset + s.size)
        sites = np.arange(s.size)
        sites_next = sites[:-1]
        rows_next = rows[:-1]
    else:
        exact = exact_region(s, i)
        lo = max(buffer + 1, exact.start)
        hi = min(dim - buffer - 1, exact.stop)
        rows = np.arange(lo, hi)
        sites = rows
        rows_next, sites_next = rows[:-1], rows[:-1]
    return {
        "matrix_diag": rate_diag[rows],
        "hamilton_diag": ham_diag[sites],
        "matrix_next": rate_next[rows_next],
        "hamilton_next": ham_next[sites_next],
    }
