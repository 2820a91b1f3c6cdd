"""
Semi-infinite Lax matrices (sites 0, 1, 2, ...) truncated to N sites.

On the half line L1 L2 != 1; the corrected L2_hat = L2 - E, with E zero except
for its first row E_{0m} = (v_0 / y_0) y_{m+1}, satisfies L1 L2_hat = 1 away
from the truncation edge. The shift pair satisfies Lambda^-1 Lambda = 1 - e_00.
"""
from dataclasses import dataclass

import numpy as np

from lattice.matrices import ab_arrays, inverse_a, lax_arrays
from lattice.state import LatticeState, SemiInfinite
from utils.errors import WindowTooSmall, ZeroY

I_MAX = 1
PROTECTED = I_MAX + 2     # rows/cols trimmed from the far edge


@dataclass
class SemiInfiniteReport:
    constraint: float          # ||L1 L2_hat - 1|| on the protected block
    left_inverse: float        # ||Lambda^-1 Lambda - (1 - e_00)||
    factorization: float       # ||L2 - (B A^-1 + E)|| on the protected block
    uncorrected: float         # ||L1 L2 - 1||, expected to be O(1)
    correction_norm: float     # max |E|


def correction_matrix(s: LatticeState) -> np.ndarray:
    if s.y[0] == 0:
        raise ZeroY("semi-infinite correction needs y_0 != 0")
    dim = s.size - 1
    e = np.zeros((dim, dim), dtype=complex)
    e[0, :] = (s.v[0] / s.y[0]) * s.y[1:dim + 1]
    return e


def semi_infinite_constraint(s: LatticeState, protected: int = PROTECTED) -> SemiInfiniteReport:
    if not isinstance(s.boundary, SemiInfinite):
        raise ValueError("semi_infinite_constraint needs a SemiInfinite state")
    dim = s.size - 1
    keep = dim - protected
    if keep < 1:
        raise WindowTooSmall(f"{s.size} sites leave no protected block")

    l1, l2, _ = lax_arrays(s.x, s.y)
    e = correction_matrix(s)
    l2_hat = l2 - e
    ident = np.eye(dim)
    block = slice(0, keep)

    constraint = np.abs((l1 @ l2_hat - ident)[block, block]).max()
    uncorrected = np.abs((l1 @ l2 - ident)[block, block]).max()

    shift = np.eye(dim, k=1)
    shift_inv = np.eye(dim, k=-1)
    left_edge = np.zeros((dim, dim))
    left_edge[0, 0] = 1.0
    left_inverse = np.abs(shift_inv @ shift - (ident - left_edge)).max()

    if np.all(s.y != 0):
        mat_a, mat_b = ab_arrays(s.x, s.y)
        factorization = np.abs((l2 - (mat_b @ inverse_a(mat_a) + e))[block, block]).max()
    else:
        factorization = float("nan")

    return SemiInfiniteReport(
        constraint=float(constraint),
        left_inverse=float(left_inverse),
        factorization=float(factorization),
        uncorrected=float(uncorrected),
        correction_norm=float(np.abs(e).max()),
    )
