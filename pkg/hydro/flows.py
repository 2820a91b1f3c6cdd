"""
Dispersionless Lax flows

    d lambda / d s = { M, lambda },   {f, g} = p (f_p g_x - f_x g_p)

with M = (lambda^n)_+ for family 1 and M = (lambda^-n)_- for family 2. Taking
residues at the zero a = e^v and the pole b = e^(v+w) of lambda turns this into
the conservation laws

    v_s = d/dx [ M(p = a) ],    (v + w)_s = d/dx [ M(p = b) ].

Flow (0, 1) is the long-wave Ablowitz-Ladik flow, half the sum of the two
first flows.
"""
import numpy as np

from hydro.charts import ModuliPoint
from hydro.field import HydroField
from hydro.projections import lax_residual, project
from hydro.symbol import LaxSymbol
from utils.errors import ProjectionFailure

AL_FLOW = (0, 1)
MAX_ORDER = 6
PROJECTION_TOL = 1e-9


def _check_flow(flow):
    family, n = flow
    if (family, n) == AL_FLOW:
        return
    if family not in (1, 2) or not 1 <= n <= MAX_ORDER:
        raise ValueError(f"hydro flow must be (1|2, 1..{MAX_ORDER}) or (0, 1), got {flow}")


def _sample_terms(family: int, n: int, a: complex, b: complex):
    """M(a), M(b) and the partials of both in (a, b) at one sample."""
    sym = LaxSymbol(ModuliPoint.from_vw(np.log(a), np.log(b / a)))
    proj = project(family, n, sym)
    at_a = (proj.value(a), proj.value.dp(a) + proj.d_a(a), proj.d_b(a))
    at_b = (proj.value(b), proj.d_a(b), proj.value.dp(b) + proj.d_b(b))
    return sym, proj, at_a, at_b


def _identity_residual(sym, proj, at_a, at_b, a_x, b_x) -> float:
    a, b = sym.a, sym.b
    a_s = a * (at_a[1] * a_x + at_a[2] * b_x)
    b_s = b * (at_b[1] * a_x + at_b[2] * b_x)
    return lax_residual(proj, sym, a_x, b_x, a_s, b_s)


def lax_identity_residual(flow, a: complex, b: complex, a_x: complex, b_x: complex) -> float:
    """Residual of the rational Lax identity at one sample with slopes (a_x, b_x)."""
    family, n = tuple(flow)
    _check_flow((family, n))
    if (family, n) == AL_FLOW:
        raise ValueError("the Lax identity is checked per family; split the AL flow first")
    sym, proj, at_a, at_b = _sample_terms(family, n, a, b)
    return _identity_residual(sym, proj, at_a, at_b, a_x, b_x)


def hydro_flow_rhs(flow, f: HydroField, check: bool = True):
    """(dv/ds, dw/ds) along `flow`; raises ProjectionFailure when the Lax identity breaks."""
    flow = tuple(flow)
    _check_flow(flow)
    if flow == AL_FLOW:
        v1, w1 = hydro_flow_rhs((1, 1), f, check)
        v2, w2 = hydro_flow_rhs((2, 1), f, check)
        return 0.5 * (v1 + v2), 0.5 * (w1 + w2)

    family, n = flow
    a, b = f.a, f.b
    a_x, b_x = f.ddx(a), f.ddx(b)
    g_a = np.empty(f.size, dtype=complex)
    g_b = np.empty(f.size, dtype=complex)

    for j in range(f.size):
        sym, proj, at_a, at_b = _sample_terms(family, n, a[j], b[j])
        g_a[j], g_b[j] = at_a[0], at_b[0]
        if check:
            res = _identity_residual(sym, proj, at_a, at_b, a_x[j], b_x[j])
            if res > PROJECTION_TOL:
                raise ProjectionFailure(
                    f"Lax identity for flow {flow} off by {res:.3e} at sample {j}"
                )

    dv = f.ddx(g_a)
    dt2 = f.ddx(g_b)
    return dv, dt2 - dv


def characteristic_matrix(flow, a: complex, b: complex) -> np.ndarray:
    """d(M(a), M(b)) / d(v, t2) at one state: (v, t2)_s = C (v, t2)_x."""
    flow = tuple(flow)
    _check_flow(flow)
    if flow == AL_FLOW:
        return 0.5 * (characteristic_matrix((1, 1), a, b) + characteristic_matrix((2, 1), a, b))
    family, n = flow
    _, _, at_a, at_b = _sample_terms(family, n, a, b)
    return np.array([[a * at_a[1], b * at_a[2]],
                     [a * at_b[1], b * at_b[2]]], dtype=complex)


def max_characteristic_speed(flow, f: HydroField) -> float:
    speed = 0.0
    for a, b in zip(f.a, f.b):
        eig = np.linalg.eigvals(characteristic_matrix(flow, a, b))
        speed = max(speed, float(np.max(np.abs(eig))))
    return speed


def flow_rhs(flow, check: bool = True):
    """Flat right-hand side for the integration engine."""
    def rhs(f: HydroField):
        dv, dw = hydro_flow_rhs(flow, f, check)
        return np.concatenate([dv, dw])
    return rhs


def flow_commutator(f: HydroField, first=(1, 1), second=(2, 1), h: float = 1e-3) -> float:
    """
    |[X_first, X_second]| / |X_first| |X_second| with the directional derivatives
    taken by Richardson-extrapolated central differences. `h` is relative to the
    size of the direction; commuting flows leave O(h^4) plus roundoff.
    """
    x1, x2 = flow_rhs(first, check=False), flow_rhs(second, check=False)
    z = f.flat()
    base1, base2 = x1(f), x2(f)

    def central(field_rhs, direction, step):
        plus = field_rhs(f.from_flat(z + step * direction, f.time))
        minus = field_rhs(f.from_flat(z - step * direction, f.time))
        return (plus - minus) / (2 * step)

    def along(field_rhs, direction):
        step = h / max(1e-300, float(np.max(np.abs(direction))))
        coarse = central(field_rhs, direction, step)
        fine = central(field_rhs, direction, 0.5 * step)
        return (4.0 * fine - coarse) / 3.0

    bracket = along(x1, base2) - along(x2, base1)
    scale = max(1e-300, float(np.max(np.abs(base1))) * float(np.max(np.abs(base2))))
    return float(np.max(np.abs(bracket))) / scale
