"""
Toeplitz Lax matrices L1, L2 and the bidiagonal factors A, B on a finite window.

For a state with sites 0..N-1 every matrix here is (N-1) x (N-1) and row j
belongs to site j, so all entries it needs (x_{j+1}, y_{j+1}) exist:

    (L1)_{n,n+1} = 1,   (L1)_{n,m} = -(v_{m+1} ... v_n) x_{n+1} y_m      (m <= n)
    (L2)_{n,n-1} = v_n, (L2)_{n,m} = -x_n y_{m+1}                        (m >= n)
    A = Lambda + diag(a),  a_n = -y_n / y_{n+1}
    B = 1 + Lambda^{-1} diag(b),  b_n = -v_n y_{n-1} / y_n

With these, L1 = A B^{-1} on all rows but the last and L2 = B A^{-1} on all
rows but the first.
"""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from lattice.state import LatticeState, Periodic, SemiInfinite
from utils.errors import ShapeViolation, WindowTooSmall, ZeroY

KINDS = ("L1", "L2", "A", "B", "generic")
SHAPE_TOL = 1e-10
MIN_SITES = 3


@dataclass
class StructuredMatrix:
    entries: np.ndarray
    kind: str = "generic"
    n_min: int = 0
    locality: int = 0     # how many neighbours one diagonal entry of this matrix reads

    @property
    def window(self):
        return self.n_min, self.n_min + self.entries.shape[0]

    def check_shape(self, region: slice | None = None, tol: float = SHAPE_TOL):
        """Entrywise structural test for the declared kind on rows/cols in `region`."""
        m = self.entries
        dim = m.shape[0]
        region = region or slice(0, dim)
        rows = np.arange(dim)[region]
        offsets = np.arange(dim)[None, :] - rows[:, None]
        block = m[rows, :]

        if self.kind == "L1":
            bad = np.abs(block[offsets > 1]).max(initial=0.0)
            bad = max(bad, np.abs(block[offsets == 1] - 1.0).max(initial=0.0))
        elif self.kind == "L2":
            bad = np.abs(block[offsets < -1]).max(initial=0.0)
        elif self.kind == "A":
            bad = np.abs(block[(offsets != 0) & (offsets != 1)]).max(initial=0.0)
            bad = max(bad, np.abs(block[offsets == 1] - 1.0).max(initial=0.0))
        elif self.kind == "B":
            bad = np.abs(block[(offsets != 0) & (offsets != -1)]).max(initial=0.0)
            bad = max(bad, np.abs(block[offsets == 0] - 1.0).max(initial=0.0))
        else:
            return 0.0

        if bad > tol:
            raise ShapeViolation(f"{self.kind} shape violated by {bad:.3e}")
        return bad


# ---------------- RAW BUILDERS ----------------

def _products_below(v: np.ndarray, dim: int) -> np.ndarray:
    """G[n, m] = v_{m+1} ... v_n for m <= n (1 on the diagonal), zero above."""
    g = np.zeros((dim, dim), dtype=complex)
    np.fill_diagonal(g, 1.0)
    for k in range(1, dim):
        # G[n, n-k] = G[n, n-k+1] * v_{n-k+1}
        rows = np.arange(k, dim)
        g[rows, rows - k] = g[rows, rows - k + 1] * v[rows - k + 1]
    return g


def lax_arrays(x: np.ndarray, y: np.ndarray):
    """Dense (L1, L2, G) for the sequences x, y over sites 0..len-1."""
    dim = x.size - 1
    v = 1.0 - x * y
    g = _products_below(v, dim)

    l1 = -(x[1:dim + 1, None] * g * y[None, :dim])
    l1[np.arange(dim - 1), np.arange(1, dim)] = 1.0

    l2 = -np.triu(x[:dim, None] * y[None, 1:dim + 1])
    l2[np.arange(1, dim), np.arange(dim - 1)] = v[1:dim]
    return l1, l2, g


def ab_arrays(x: np.ndarray, y: np.ndarray):
    if np.any(y == 0):
        raise ZeroY("A and B need y_n != 0 on the whole window")
    dim = x.size - 1
    v = 1.0 - x * y
    a = -y[:dim] / y[1:dim + 1]
    b = -v[1:dim] * y[:dim - 1] / y[1:dim]

    mat_a = np.diag(a).astype(complex)
    mat_a[np.arange(dim - 1), np.arange(1, dim)] = 1.0
    mat_b = np.eye(dim, dtype=complex)
    mat_b[np.arange(1, dim), np.arange(dim - 1)] = b
    return mat_a, mat_b


def _window_sequences(s: LatticeState, pad: int):
    if isinstance(s.boundary, Periodic):
        x, y = s.unrolled(pad)
        return x, y, -pad
    return s.x, s.y, int(s.sites[0])


def _require_sites(s: LatticeState):
    if s.size < MIN_SITES:
        raise WindowTooSmall(f"need at least {MIN_SITES} sites, got {s.size}")


# ---------------- OPERATIONS ----------------

def build_lax(s: LatticeState, pad: int = 0):
    """
    L1, L2 on the state's window. Periodic states are unrolled first with
    `pad` extra sites per side (at least one full period).
    """
    _require_sites(s)
    if isinstance(s.boundary, Periodic):
        pad = max(pad, s.size)
    x, y, n_min = _window_sequences(s, pad)
    l1, l2, _ = lax_arrays(x, y)
    return (
        StructuredMatrix(l1, kind="L1", n_min=n_min, locality=1),
        StructuredMatrix(l2, kind="L2", n_min=n_min, locality=1),
    )


def build_ab(s: LatticeState, pad: int = 0):
    _require_sites(s)
    if isinstance(s.boundary, Periodic):
        pad = max(pad, s.size)
    x, y, n_min = _window_sequences(s, pad)
    mat_a, mat_b = ab_arrays(x, y)
    return (
        StructuredMatrix(mat_a, kind="A", n_min=n_min, locality=1),
        StructuredMatrix(mat_b, kind="B", n_min=n_min, locality=1),
    )


def inverse_b(mat_b: np.ndarray) -> np.ndarray:
    """Unit lower-bidiagonal inverse by forward substitution (truncated geometric series)."""
    return solve_triangular(mat_b, np.eye(mat_b.shape[0]), lower=True, unit_diagonal=True)


def inverse_a(mat_a: np.ndarray) -> np.ndarray:
    return solve_triangular(mat_a, np.eye(mat_a.shape[0]), lower=False)


def factorization_residuals(s: LatticeState, buffer: int | None = None):
    """(||L1 - A B^-1||, ||L2 - B A^-1||) over interior rows and columns."""
    l1, l2 = build_lax(s)
    mat_a, mat_b = build_ab(s)
    a, b = mat_a.entries, mat_b.entries
    dim = a.shape[0]
    if buffer is None:
        buffer = s.boundary.buffer if hasattr(s.boundary, "buffer") else 1
    if isinstance(s.boundary, SemiInfinite):
        inner = slice(1, dim - buffer)
    elif isinstance(s.boundary, Periodic):
        inner = slice(s.size, dim - s.size)
    else:
        inner = slice(buffer, dim - buffer)

    r1 = l1.entries - a @ inverse_b(b)
    r2 = l2.entries - b @ inverse_a(a)
    return (float(np.abs(r1[inner, inner]).max()), float(np.abs(r2[inner, inner]).max()))


def dressing_check(s: LatticeState) -> float:
    """
    ||ell^-1 L1 ell - Lambda (1 - x (1 - Lambda^-1)^-1 y)||_inf, last row excluded.
    Both sides only involve entries inside the window, so the residual is exact.
    """
    _require_sites(s)
    x, y = s.x, s.y
    if isinstance(s.boundary, Periodic):
        x, y = s.unrolled(s.size)
    dim = x.size - 1
    v = 1.0 - x * y

    ell = np.ones(dim, dtype=complex)
    ell[1:] = np.cumprod(v[1:dim])

    l1, _, _ = lax_arrays(x, y)
    dressed = (l1 / ell[:, None]) * ell[None, :]

    # (1 - Lambda^-1)^-1 is the lower triangle of ones
    inner = np.tril(np.ones((dim + 1, dim + 1))) * x[:, None] * y[None, :dim + 1]
    rhs = np.eye(dim + 1, dtype=complex) - inner
    rhs = rhs[1:, :dim]           # Lambda shifts rows up by one

    gap = dressed[: dim - 1] - rhs[: dim - 1]
    return float(np.abs(gap).max())


# ---------------- PROJECTIONS ----------------

def upper_part(m: np.ndarray) -> np.ndarray:
    """()_+ : upper triangle including the diagonal."""
    return np.triu(m)


def lower_part(m: np.ndarray) -> np.ndarray:
    """()_- : strictly lower triangle."""
    return np.tril(m, -1)


def state_from_ab(a: np.ndarray, b: np.ndarray, like: LatticeState, y0: complex = 1.0) -> LatticeState:
    """
    Representative (x, y) from the factor entries; y is fixed by y_0 = y0.
    a has one entry per matrix row, b one per row from the second on.
    """
    dim = a.size
    y = np.empty(dim + 1, dtype=complex)
    y[0] = y0
    for n in range(dim):
        y[n + 1] = -y[n] / a[n]
    v = np.empty(dim + 1, dtype=complex)
    v[1:dim] = b / a[: dim - 1]
    v[0], v[dim] = like.v[0], like.v[-1]
    x = (1.0 - v) / y
    return like.with_values(x, y)
