import numpy as np
import pytest

from hydro.charts import ModuliPoint, jacobian_t_by_vw, jacobian_vw_by_t, random_vw_points, t_to_vw
from hydro.continuum import continuum_sweep, gauge_invariants, harmonic_profile, lattice_from_profile
from hydro.densities import al_density, density_h, density_route_gap
from hydro.field import FD4, HydroField
from hydro.flows import flow_commutator, hydro_flow_rhs, lax_identity_residual
from hydro.pde import pde_integrate
from hydro.symbol import LaxSymbol, lax_eval
from simulation.metrics import compute_drift
from utils.errors import BranchCut, ConfigError, GradientCatastrophe, PoleHit
from verification.hydro_suite import random_field


@pytest.fixture
def points():
    return random_vw_points(np.random.default_rng(11), 50)


# ---------- Charts / symbol ----------

def test_chart_conversions(points):
    for pt in points[:10]:
        t1, t2 = pt.t
        v, w = pt.vw
        assert t1 == pytest.approx(np.exp(v) * (np.exp(w) - 1))
        assert t2 == pytest.approx(v + w)
        back = ModuliPoint.from_t(t1, t2)
        assert back.vw == pytest.approx((v, w), abs=1e-14)
        assert back.a == pytest.approx(pt.a) and back.b == pytest.approx(pt.b)
        np.testing.assert_allclose(jacobian_t_by_vw(pt) @ jacobian_vw_by_t(pt), np.eye(2), atol=1e-14)


def test_chart_branch_cut():
    with pytest.raises(BranchCut):
        t_to_vw(2.0, 0.0)
    with pytest.raises(ValueError):
        ModuliPoint("uv", 0.0, 0.0)


def test_lax_symbol_forms_agree(points):
    p = np.array([2.3 + 0.7j, -1.9 + 1.1j, 0.4 - 2.2j])
    for pt in points[:10]:
        sym = LaxSymbol(pt)
        value = lax_eval(sym, p)
        np.testing.assert_allclose(value, sym.rational(p), rtol=1e-13)
        np.testing.assert_allclose(value * sym.inverse(p), 1.0, atol=1e-13)
        # expansion p + t1 + O(1/p)
        big = 1e7
        assert lax_eval(sym, big) - big == pytest.approx(sym.t1, abs=1e-6)


def test_lax_symbol_pole():
    sym = LaxSymbol(ModuliPoint.from_vw(0.1, -0.5))
    with pytest.raises(PoleHit):
        lax_eval(sym, sym.b)


# ---------- Densities ----------

@pytest.mark.parametrize("family", [1, 2])
@pytest.mark.parametrize("n", range(1, 9))
def test_density_routes_agree(points, family, n):
    assert max(density_route_gap(family, n, pt) for pt in points) < 1e-12


def test_density_closed_forms(points):
    for pt in points[:10]:
        t1, t2 = pt.t
        v, w = pt.vw
        assert density_h(1, 1, pt) == pytest.approx(t1, abs=1e-12)
        assert density_h(1, 2, pt) == pytest.approx(0.5 * t1 ** 2 + t1 * np.exp(t2), abs=1e-12)
        assert density_h(2, 1, pt) == pytest.approx(np.exp(-v) * (np.exp(w) - 1), abs=1e-12)
        assert al_density(pt) == pytest.approx((1 - np.exp(w)) * np.cosh(v), abs=1e-12)


def test_density_rejects_bad_indices(points):
    with pytest.raises(ValueError):
        density_h(3, 1, points[0])
    with pytest.raises(ValueError):
        density_h(1, 0, points[0])


# ---------- Flows ----------

@pytest.mark.parametrize("flow", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)])
def test_lax_identity(points, flow):
    rng = np.random.default_rng(3)
    for pt in points[:10]:
        a_x, b_x = rng.normal(size=2) + 1j * rng.normal(size=2)
        assert lax_identity_residual(flow, pt.a, pt.b, a_x, b_x) < 1e-10


def test_lax_identity_rejects_al_flow(points):
    with pytest.raises(ValueError):
        lax_identity_residual((0, 1), points[0].a, points[0].b, 1.0, 1.0)


@pytest.mark.parametrize("flow", [(1, 1), (2, 2), (0, 1)])
def test_constant_field_is_stationary(flow):
    f = HydroField(2 * np.pi, np.full(32, 0.2), np.full(32, -0.6))
    dv, dw = hydro_flow_rhs(flow, f)
    assert np.max(np.abs(dv)) < 1e-12 and np.max(np.abs(dw)) < 1e-12


def test_flow_rejects_unknown_family():
    f = HydroField(2 * np.pi, np.full(8, 0.2), np.full(8, -0.6))
    with pytest.raises(ValueError):
        hydro_flow_rhs((3, 1), f)


def test_al_flow_is_mean_of_first_flows():
    f = random_field(np.random.default_rng(5), grid=32)
    al = np.concatenate(hydro_flow_rhs((0, 1), f))
    first = np.concatenate(hydro_flow_rhs((1, 1), f))
    second = np.concatenate(hydro_flow_rhs((2, 1), f))
    np.testing.assert_allclose(al, 0.5 * (first + second), atol=1e-12)


@pytest.mark.parametrize("grid", [32, 64, 128])
@pytest.mark.parametrize("second", [(2, 1), (1, 2)])
def test_flows_commute(grid, second):
    f = random_field(np.random.default_rng(17), grid=grid)
    assert flow_commutator(f, (1, 1), second) < 1e-7
    # refining the step must not grow the residual
    assert flow_commutator(f, (1, 1), second, h=5e-4) < 1e-7


def test_spectral_and_fd4_derivatives_agree():
    f = random_field(np.random.default_rng(5), grid=128)
    g = HydroField(f.length, f.v, f.w, derivative=FD4)
    np.testing.assert_allclose(g.ddx(f.v), f.ddx(f.v), atol=1e-4)


# ---------- PDE ----------

def test_pde_conserves_integrals():
    profile = harmonic_profile()
    f = HydroField.from_profile(128, profile.length, profile.v, profile.w)
    result = pde_integrate(f, (1, 1), 0.1, record_every=5)
    assert result.final.time == pytest.approx(0.1)
    drift = compute_drift(result.curves)
    assert set(drift) == {"int_t1", "int_t2", "int_h1_2"}
    assert max(d["max_rel_drift"] for d in drift.values()) < 1e-8


def test_pde_gradient_catastrophe_flushes():
    profile = harmonic_profile()
    f = HydroField.from_profile(64, profile.length, profile.v, profile.w)
    flushed = []
    with pytest.raises(GradientCatastrophe):
        pde_integrate(f, (1, 1), 0.1, max_gradient=1e-3, flush=flushed.append)
    assert flushed and flushed[0].halted


# ---------- Continuum ----------

def test_lattice_sampling_reads_back_profile():
    profile = harmonic_profile()
    s = lattice_from_profile(profile, 0.1)
    v, w = gauge_invariants(s)
    h = profile.length / s.size
    sites = np.arange(s.size)
    np.testing.assert_allclose(w, profile.w(h * sites), atol=1e-12)
    np.testing.assert_allclose(v[1:], profile.v(h * (sites[1:] - 0.5)), atol=1e-12)


def test_lattice_sampling_errors():
    with pytest.raises(ConfigError):
        lattice_from_profile(harmonic_profile(), 2.0)
    with pytest.raises(ConfigError):
        lattice_from_profile(harmonic_profile(v0=0.3), 0.1)


@pytest.mark.slow
def test_continuum_limit():
    first, second = continuum_sweep(harmonic_profile(), [0.1, 0.05])
    assert second.sup_error / first.sup_error <= 0.6
    assert second.order_estimate >= 0.7
