"""
Long-wave comparison of the Ablowitz-Ladik lattice with its dispersionless limit.

A slow periodic profile (v(x), w(x)) on [0, length) is sampled on N = length/eps
sites through

    x_n = e^phi_n sqrt(1 - e^w_n),   y_n = e^-phi_n sqrt(1 - e^w_n),
    phi_n - phi_(n-1) = v_n,  phi_0 = 0,

with v_n = v(eps (n - 1/2)) and w_n = w(eps n). The lattice runs the
Ablowitz-Ladik flow to t = T / eps, the hydrodynamic field runs the matching
flow to T, and the gauge invariants

    w_n = log(1 - x_n y_n),   v_n = (1/2) log(x_n y_(n-1) / (x_(n-1) y_n))

are compared in the sup norm.
"""
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from hydro.field import HydroField
from hydro.flows import AL_FLOW
from hydro.pde import pde_integrate
from lattice.integrator import integrate
from lattice.state import LatticeState, Periodic
from simulation.metrics import order_estimate
from utils.errors import ConfigError
from utils.logger import get_logger

log = get_logger("hydro.continuum")


@dataclass(frozen=True)
class SlowProfile:
    v: Callable[[np.ndarray], np.ndarray]
    w: Callable[[np.ndarray], np.ndarray]
    length: float = 2.0 * np.pi


@dataclass
class ComparisonReport:
    epsilon: float
    sup_error: float
    order_estimate: float | None = None

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "sup_error": self.sup_error,
            "order_estimate": self.order_estimate,
        }


def harmonic_profile(v0: float = 0.0, w0: float = -0.7, amplitude: float = 0.1,
                     length: float = 2.0 * np.pi) -> SlowProfile:
    k = 2.0 * np.pi / length
    return SlowProfile(
        v=lambda x: v0 + amplitude * np.sin(k * x),
        w=lambda x: w0 + amplitude * np.cos(k * x),
        length=length,
    )


# ---------- Sampling and reconstruction ----------

def lattice_from_profile(profile: SlowProfile, eps: float) -> LatticeState:
    n = int(round(profile.length / eps))
    if n < 8:
        raise ConfigError(f"eps = {eps} leaves only {n} lattice sites")
    h = profile.length / n
    sites = np.arange(n)
    v_n = np.asarray(profile.v(h * (sites - 0.5)), dtype=complex)
    w_n = np.asarray(profile.w(h * sites), dtype=complex)
    if abs(np.sum(v_n)) > 1e-10:
        raise ConfigError("periodic lattice data need a v profile with zero mean")
    phi = np.concatenate([[0.0], np.cumsum(v_n[1:])])
    r = np.sqrt(1.0 - np.exp(w_n))
    return LatticeState(x=np.exp(phi) * r, y=np.exp(-phi) * r, boundary=Periodic(n))


def gauge_invariants(s: LatticeState):
    """(v_n, w_n) read back from the lattice."""
    x, y = s.x, s.y
    w = np.log(1.0 - x * y)
    v = 0.5 * np.log(x * np.roll(y, 1) / (np.roll(x, 1) * y))
    return v, w


def fourier_eval(samples: np.ndarray, length: float, points: np.ndarray) -> np.ndarray:
    """Trigonometric interpolant of periodic samples, evaluated at arbitrary points."""
    m = samples.size
    coeffs = np.fft.fft(samples) / m
    k = np.fft.fftfreq(m, d=1.0 / m)
    if m % 2 == 0:
        coeffs = coeffs.copy()
        coeffs[m // 2] *= 0.5
        k_extra = np.array([m // 2])
        coeffs = np.concatenate([coeffs, [coeffs[m // 2]]])
        k = np.concatenate([k, k_extra])
    phase = np.exp(2j * np.pi * np.outer(points, k) / length)
    return phase @ coeffs


# ---------- Comparison ----------

def continuum_compare(
    profile: SlowProfile,
    eps: float,
    slow_time: float = 0.5,
    *,
    lattice_dt: float = 0.01,
    grid: int = 256,
) -> ComparisonReport:
    """Sup-norm gap between lattice invariants at t = T/eps and the hydro field at T."""
    lattice0 = lattice_from_profile(profile, eps)
    n = lattice0.size
    h = profile.length / n

    lattice_t = slow_time / h
    steps = max(1, int(np.ceil(lattice_t / lattice_dt)))
    lat = integrate(lattice0, AL_FLOW, lattice_t, lattice_t / steps, keep_snapshots=False)

    field0 = HydroField.from_profile(grid, profile.length, profile.v, profile.w)
    hyd = pde_integrate(field0, AL_FLOW, slow_time, record_every=10**9).final

    v_lat, w_lat = gauge_invariants(lat.final)
    sites = np.arange(n)
    v_hyd = fourier_eval(hyd.v, profile.length, h * (sites - 0.5))
    w_hyd = fourier_eval(hyd.w, profile.length, h * sites)
    err = max(float(np.max(np.abs(v_lat - v_hyd))), float(np.max(np.abs(w_lat - w_hyd))))
    log.info("eps=%g (N=%d): sup error %.3e", eps, n, err)
    return ComparisonReport(epsilon=float(h), sup_error=err)


def continuum_sweep(profile: SlowProfile, epsilons, slow_time: float = 0.5, **kw) -> List[ComparisonReport]:
    """One report per eps; the order estimate goes on every report after the first."""
    reports = [continuum_compare(profile, e, slow_time, **kw) for e in epsilons]
    for prev, cur in zip(reports, reports[1:]):
        ratio = prev.epsilon / cur.epsilon
        cur.order_estimate = order_estimate([prev.sup_error, cur.sup_error], ratio)
    return reports
