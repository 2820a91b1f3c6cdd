"""
Trace Hamiltonians H(k)_i = -(1/i) tr L_k^i and their gradients.

Diagonal entries of L_k^i only read sites within distance i, so a periodic
state is unrolled with a few spare sites per side and summed over one period,
and a window is summed over rows at least `buffer >= i` from the edges.

Gradients use delta tr L^i = i tr(L^{i-1} delta L). With P = L^{i-1},
G = (1 - v Lambda^-1)^-1 and K = (1 - Lambda)^-1:

    L1:  dH/dx_n = (G y P)_{n-1,n-1} - y_n (Lambda^-1 G y P x+ G)_{nn}
         dH/dy_n = (P x+ G)_{nn}     - x_n (Lambda^-1 G y P x+ G)_{nn}
    L2:  dH/dx_n = y_n (Lambda^-1 P)_{nn} + (K y+ P)_{nn}
         dH/dy_n = x_n (Lambda^-1 P)_{nn} + (P x K)_{n-1,n-1}
"""
import numpy as np

from lattice.matrices import lax_arrays
from lattice.state import LatticeState, Periodic, Window
from utils.errors import WindowTooSmall


def _extended(s: LatticeState, radius: int):
    """(x, y, first, count): sequences plus the positions where results are exact."""
    if isinstance(s.boundary, Periodic):
        pad = radius + 2
        x, y = s.unrolled(pad)
        return x, y, pad, s.size

    if isinstance(s.boundary, Window):
        if s.boundary.buffer < radius:
            raise WindowTooSmall(f"buffer {s.boundary.buffer} < locality radius {radius}")
        lo = max(radius, s.boundary.buffer)
    else:
        lo = 0
    hi = s.size - 1 - max(radius, 1)
    if hi <= lo:
        raise WindowTooSmall(f"{s.size} sites leave no interior at radius {radius}")
    return s.x, s.y, lo, hi - lo


def hamiltonian(k: int, i: int, s: LatticeState) -> complex:
    if k not in (1, 2) or i < 1:
        raise ValueError(f"no Hamiltonian H({k})_{i}")
    x, y, first, count = _extended(s, i)
    l1, l2, _ = lax_arrays(x, y)
    power = np.linalg.matrix_power(l1 if k == 1 else l2, i)
    return complex(-np.trace(power[first:first + count, first:first + count]) / i)


def al_hamiltonian(s: LatticeState) -> complex:
    return 0.5 * (hamiltonian(1, 1, s) + hamiltonian(2, 1, s))


def hamiltonian_gradient(k: int, i: int, s: LatticeState):
    """
    (dH/dx, dH/dy) as full-length arrays; entries outside the exact region
    (see `LatticeState.interior(i + 1)`) are zero.
    """
    radius = i + 1
    x, y, first, count = _extended(s, radius)
    dim = x.size - 1
    l1, l2, g = lax_arrays(x, y)
    xs, ys = x[:dim], y[:dim]

    gx = np.zeros(dim, dtype=complex)
    gy = np.zeros(dim, dtype=complex)
    n = np.arange(1, dim - 1)

    if k == 1:
        p = np.linalg.matrix_power(l1, i - 1)
        xg = x[1:dim + 1, None] * g                  # x+ G
        gyp = (g * ys[None, :]) @ p                   # G y P
        m = gyp @ xg                                  # G y P x+ G
        shifted = m[n - 1, n]                         # (Lambda^-1 M)_{nn}
        gx[n] = np.diagonal(gyp)[n - 1] - ys[n] * shifted
        gy[n] = np.diagonal(p @ xg)[n] - xs[n] * shifted
    elif k == 2:
        p = np.linalg.matrix_power(l2, i - 1)
        upper_ones = np.triu(np.ones((dim, dim)))
        shifted = p[n - 1, n]
        kyp = upper_ones @ (y[1:dim + 1, None] * p)   # K y+ P
        pxk = (p * xs[None, :]) @ upper_ones          # P x K
        gx[n] = ys[n] * shifted + np.diagonal(kyp)[n]
        gy[n] = xs[n] * shifted + np.diagonal(pxk)[n - 1]
    else:
        raise ValueError(f"no Hamiltonian family {k}")

    out_x = np.zeros(s.size, dtype=complex)
    out_y = np.zeros(s.size, dtype=complex)
    if isinstance(s.boundary, Periodic):
        out_x[:] = gx[first:first + count]
        out_y[:] = gy[first:first + count]
    else:
        out_x[first:first + count] = gx[first:first + count]
        out_y[first:first + count] = gy[first:first + count]
    return out_x, out_y


def exact_region(s: LatticeState, i: int) -> slice:
    """Sites on which flow and gradient values of order i are exact."""
    if isinstance(s.boundary, Periodic):
        return slice(0, s.size)
    _, _, first, count = _extended(s, i + 1)
    return slice(first, first + count)
