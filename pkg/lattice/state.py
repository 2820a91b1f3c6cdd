"""
Lattice state for the Ablowitz-Ladik / Toeplitz reduction.

Arrays are positional: entry j holds the site n = n_min + j. Three boundary
modes are supported:

- Periodic(n): indices mod n.
- Window(n_min, n_max, buffer): finite piece of a bi-infinite lattice; identities
  are only asserted on the interior, `buffer` sites away from each edge.
- SemiInfinite(n_trunc): sites 0..n_trunc-1, nothing to the left of site 0.
"""
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from utils.errors import BlowUp, WindowTooSmall


@dataclass(frozen=True)
class Periodic:
    n: int


@dataclass(frozen=True)
class Window:
    n_min: int
    n_max: int           # exclusive
    buffer: int = 4


@dataclass(frozen=True)
class SemiInfinite:
    n_trunc: int


Boundary = Union[Periodic, Window, SemiInfinite]

BLOWUP_EPS = 1e-12


def boundary_size(boundary: Boundary) -> int:
    if isinstance(boundary, Periodic):
        return boundary.n
    if isinstance(boundary, Window):
        return boundary.n_max - boundary.n_min
    return boundary.n_trunc


def boundary_origin(boundary: Boundary) -> int:
    return boundary.n_min if isinstance(boundary, Window) else 0


@dataclass(frozen=True)
class LatticeState:
    x: np.ndarray
    y: np.ndarray
    boundary: Boundary
    time: float = 0.0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=complex)
        y = np.asarray(self.y, dtype=complex)
        if x.shape != y.shape or x.ndim != 1:
            raise ValueError(f"x and y must be 1-d arrays of equal length, got {x.shape} and {y.shape}")
        if x.size != boundary_size(self.boundary):
            raise ValueError(f"{x.size} sites do not match boundary {self.boundary}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    # ---------- Views ----------

    @property
    def size(self) -> int:
        return self.x.size

    @property
    def v(self) -> np.ndarray:
        return 1.0 - self.x * self.y

    @property
    def sites(self) -> np.ndarray:
        return boundary_origin(self.boundary) + np.arange(self.size)

    @property
    def is_periodic(self) -> bool:
        return isinstance(self.boundary, Periodic)

    def interior(self, radius: int) -> slice:
        """Positions whose value depends only on sites inside the window."""
        if self.is_periodic:
            return slice(0, self.size)
        if isinstance(self.boundary, Window):
            radius = max(radius, self.boundary.buffer)
            lo = radius
        else:
            lo = 0
        hi = self.size - radius
        if hi <= lo:
            raise WindowTooSmall(
                f"{self.size} sites leave no interior at radius {radius}"
            )
        return slice(lo, hi)

    def with_values(self, x, y, time: float | None = None) -> "LatticeState":
        return replace(self, x=x, y=y, time=self.time if time is None else time)

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.y])

    def from_flat(self, z: np.ndarray, time: float) -> "LatticeState":
        return self.with_values(z[: self.size], z[self.size:], time)

    def check_regular(self, eps: float = BLOWUP_EPS):
        worst = np.min(np.abs(self.v))
        if not np.isfinite(self.x).all() or not np.isfinite(self.y).all() or worst < eps:
            raise BlowUp(f"|1 - x y| = {worst:.3e} at t = {self.time:.6g}")

    def unrolled(self, pad: int):
        """Periodic data copied onto pad + n + pad consecutive sites."""
        idx = np.arange(-pad, self.size + pad) % self.size
        return self.x[idx], self.y[idx]


@dataclass
class DressingDiag:
    ell: np.ndarray = field(default_factory=lambda: np.ones(0, dtype=complex))

    @classmethod
    def from_state(cls, s: LatticeState) -> "DressingDiag":
        """ell_first = 1, ell_{n+1} = ell_n (1 - x_{n+1} y_{n+1})."""
        v = s.v
        ell = np.ones(s.size, dtype=complex)
        ell[1:] = np.cumprod(v[1:])
        return cls(ell=ell)


# ---------------- CONSTRUCTORS ----------------

def random_state(rng: np.random.Generator, boundary: Boundary, amplitude: float = 0.2,
                 real: bool = False) -> LatticeState:
    n = boundary_size(boundary)

    def draw():
        re = rng.uniform(-amplitude, amplitude, n)
        if real:
            return re.astype(complex)
        return re + 1j * rng.uniform(-amplitude, amplitude, n)

    return LatticeState(x=draw(), y=draw(), boundary=boundary)


def nonzero_y_state(rng: np.random.Generator, boundary: Boundary, amplitude: float = 0.2) -> LatticeState:
    """Random state with |y_n| bounded away from zero, as the A, B factors need."""
    n = boundary_size(boundary)
    x = amplitude * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n))
    phase = np.exp(1j * rng.uniform(0, 2 * np.pi, n))
    y = amplitude * rng.uniform(0.5, 1.0, n) * phase
    return LatticeState(x=x, y=y, boundary=boundary)


def generic_state(rng: np.random.Generator, boundary: Boundary, low: float = 0.7) -> LatticeState:
    """O(1) data with |x_n|, |y_n| in [low, 1] and Re(x_n y_n) <= 0, so |1 - x_n y_n| >= 1."""
    n = boundary_size(boundary)
    y = rng.uniform(low, 1.0, n) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
    turn = np.exp(1j * rng.uniform(0.5 * np.pi, 1.5 * np.pi, n))
    x = rng.uniform(low, 1.0, n) * turn * np.conj(y) / np.abs(y)
    return LatticeState(x=x, y=y, boundary=boundary)
