from dataclasses import dataclass, replace

import numpy as np

from hydro.charts import ModuliPoint

SPECTRAL = "spectral"
FD4 = "fd4"


@dataclass(frozen=True)
class HydroField:
    """(v, w) sampled on a uniform periodic grid x_j = j * length / size."""

    length: float
    v: np.ndarray
    w: np.ndarray
    time: float = 0.0
    derivative: str = SPECTRAL

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError(f"grid length must be > 0, got {self.length}")
        v = np.asarray(self.v, dtype=complex)
        w = np.asarray(self.w, dtype=complex)
        if v.shape != w.shape or v.ndim != 1:
            raise ValueError("v and w must be 1-d arrays of equal size")
        if self.derivative not in (SPECTRAL, FD4):
            raise ValueError(f"unknown derivative scheme {self.derivative!r}")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)

    @classmethod
    def from_profile(cls, size: int, length: float, v_of_x, w_of_x, **kw) -> "HydroField":
        x = np.arange(size) * (length / size)
        return cls(length, v_of_x(x), w_of_x(x), **kw)

    # ---------- Grid ----------

    @property
    def size(self) -> int:
        return self.v.size

    @property
    def dx(self) -> float:
        return self.length / self.size

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.size) * self.dx

    # ---------- Chart views ----------

    @property
    def a(self) -> np.ndarray:
        return np.exp(self.v)

    @property
    def b(self) -> np.ndarray:
        return np.exp(self.v + self.w)

    @property
    def t1(self) -> np.ndarray:
        return self.b - self.a

    @property
    def t2(self) -> np.ndarray:
        return self.v + self.w

    def points(self):
        return [ModuliPoint.from_vw(v, w) for v, w in zip(self.v, self.w)]

    # ---------- Derivatives ----------

    def ddx(self, f) -> np.ndarray:
        f = np.asarray(f, dtype=complex)
        if self.derivative == SPECTRAL:
            k = 2j * np.pi * np.fft.fftfreq(self.size, d=self.dx)
            if self.size % 2 == 0:
                k[self.size // 2] = 0.0
            return np.fft.ifft(k * np.fft.fft(f))
        return (8.0 * (np.roll(f, -1) - np.roll(f, 1))
                - (np.roll(f, -2) - np.roll(f, 2))) / (12.0 * self.dx)

    def integral(self, f) -> complex:
        """Periodic trapezoid rule, spectrally accurate for smooth f."""
        return complex(np.sum(f) * self.dx)

    # ---------- Integrator protocol ----------

    def flat(self) -> np.ndarray:
        return np.concatenate([self.v, self.w])

    def from_flat(self, z, time) -> "HydroField":
        n = self.size
        return replace(self, v=z[:n], w=z[n:], time=time)

    def is_constant(self, tol: float = 1e-14) -> bool:
        return bool(np.ptp(self.v.real) + np.ptp(self.v.imag) < tol
                    and np.ptp(self.w.real) + np.ptp(self.w.imag) < tol)
