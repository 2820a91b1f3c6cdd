import numpy as np
import pytest

from lattice.flows import AL_FLOW, al_rhs, ham_flow_rhs, matrix_flow_invariant_rates
from lattice.hamiltonians import al_hamiltonian, hamiltonian
from lattice.integrator import integrate
from lattice.matrices import build_ab, build_lax, dressing_check, factorization_residuals
from lattice.properties import poisson_bracket
from lattice.semi_infinite import correction_matrix, semi_infinite_constraint
from lattice.state import LatticeState, Periodic, SemiInfinite, Window, generic_state, nonzero_y_state, random_state
from simulation.metrics import compute_drift
from utils.errors import BlowUp, WindowTooSmall, ZeroY


@pytest.fixture
def rng():
    return np.random.default_rng(7)


# ---------- State ----------

def test_state_rejects_mismatched_sizes():
    with pytest.raises(ValueError):
        LatticeState(x=np.zeros(4), y=np.zeros(5), boundary=Periodic(4))
    with pytest.raises(ValueError):
        LatticeState(x=np.zeros(4), y=np.zeros(4), boundary=Periodic(5))


def test_window_sites_start_at_n_min(rng):
    s = random_state(rng, Window(-3, 5, 2))
    assert list(s.sites) == list(range(-3, 5))
    assert s.interior(1) == slice(2, 6)


# ---------- Flows ----------

def test_al_flow_is_mean_of_factor_flows(rng):
    for _ in range(100):
        s = random_state(rng, Periodic(int(rng.integers(6, 17))))
        dx, dy = al_rhs(s)
        x1, y1 = ham_flow_rhs(1, 1, s)
        x2, y2 = ham_flow_rhs(2, 1, s)
        np.testing.assert_allclose(dx, 0.5 * (x1 + x2), atol=1e-12, rtol=0)
        np.testing.assert_allclose(dy, 0.5 * (y1 + y2), atol=1e-12, rtol=0)


def test_al_rhs_matches_closed_form(rng):
    s = random_state(rng, Periodic(8))
    dx, dy = al_rhs(s)
    n = 3
    assert dx[n] == pytest.approx(0.5 * s.v[n] * (s.x[n - 1] + s.x[n + 1]))
    assert dy[n] == pytest.approx(-0.5 * s.v[n] * (s.y[n - 1] + s.y[n + 1]))


def test_first_hamiltonians_closed_forms(rng):
    s = random_state(rng, Periodic(12))
    assert hamiltonian(1, 1, s) == pytest.approx(np.sum(np.roll(s.x, -1) * s.y), abs=1e-13)
    assert hamiltonian(2, 1, s) == pytest.approx(np.sum(s.x * np.roll(s.y, -1)), abs=1e-13)
    assert al_hamiltonian(s) == pytest.approx(0.5 * (hamiltonian(1, 1, s) + hamiltonian(2, 1, s)))


def test_hamiltonian_rejects_unknown_family(rng):
    s = random_state(rng, Periodic(6))
    with pytest.raises(ValueError):
        hamiltonian(3, 1, s)
    with pytest.raises(ValueError):
        hamiltonian(1, 0, s)


@pytest.mark.parametrize("first, second", [((1, 1), (2, 1)), ((1, 2), (2, 2)), ((1, 1), (1, 3))])
def test_hamiltonians_commute(rng, first, second):
    s = random_state(rng, Periodic(10))
    assert abs(poisson_bracket(first, second, s)) < 1e-12


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("i", [1, 2, 3])
def test_matrix_flow_matches_hamilton_equations(rng, k, i):
    s = nonzero_y_state(rng, Periodic(8))
    rates = matrix_flow_invariant_rates((k, i), s, buffer=4)
    np.testing.assert_allclose(rates["matrix_diag"], rates["hamilton_diag"], atol=1e-10, rtol=0)
    np.testing.assert_allclose(rates["matrix_next"], rates["hamilton_next"], atol=1e-10, rtol=0)


# ---------- Lax / factorization ----------

def test_lax_entries_follow_index_convention(rng):
    s = random_state(rng, Window(0, 10, 2))
    l1, l2 = build_lax(s)
    x, y, v = s.x, s.y, s.v
    assert l1.entries[2, 3] == 1
    assert l1.entries[4, 4] == pytest.approx(-x[5] * y[4])
    assert l1.entries[4, 2] == pytest.approx(-v[3] * v[4] * x[5] * y[2])
    assert l2.entries[4, 3] == pytest.approx(v[4])
    assert l2.entries[4, 6] == pytest.approx(-x[4] * y[7])
    assert l1.entries[3, 5] == 0


def test_ab_are_bidiagonal(rng):
    s = nonzero_y_state(rng, Window(0, 12, 4))
    mat_a, mat_b = build_ab(s)
    a, b = mat_a.entries, mat_b.entries
    assert np.count_nonzero(np.triu(a, 2)) == 0 and np.count_nonzero(np.tril(a, -1)) == 0
    assert np.count_nonzero(np.triu(b, 1)) == 0 and np.count_nonzero(np.tril(b, -2)) == 0
    np.testing.assert_allclose(np.diagonal(b), 1.0)
    assert a[3, 3] == pytest.approx(-s.y[3] / s.y[4])


def test_factorization_on_random_windows(rng):
    for _ in range(20):
        s = nonzero_y_state(rng, Window(0, int(rng.integers(16, 25)), 4))
        r1, r2 = factorization_residuals(s, buffer=4)
        assert r1 < 1e-12 and r2 < 1e-12


def test_factorization_periodic(rng):
    r1, r2 = factorization_residuals(nonzero_y_state(rng, Periodic(8)))
    assert max(r1, r2) < 1e-12


def test_dressing(rng):
    assert dressing_check(nonzero_y_state(rng, Window(0, 16, 4))) < 1e-12


def test_tiny_window_is_rejected(rng):
    with pytest.raises(WindowTooSmall):
        build_lax(random_state(rng, Window(0, 2, 0)))


# ---------- Semi-infinite ----------

def test_semi_infinite_constraint(rng):
    report = semi_infinite_constraint(nonzero_y_state(rng, SemiInfinite(20)))
    assert report.constraint < 1e-12
    assert report.factorization < 1e-12
    assert report.left_inverse < 1e-12


def test_bi_infinite_identity_fails_on_the_half_line(rng):
    for _ in range(20):
        s = generic_state(rng, SemiInfinite(20))
        assert np.min(np.abs(1.0 - s.x * s.y)) >= 1.0 - 1e-12
        assert semi_infinite_constraint(s).uncorrected > 0.1


def test_semi_infinite_unit_corner_needs_no_correction(rng):
    s = nonzero_y_state(rng, SemiInfinite(20))
    x = s.x.copy()
    x[0] = 1.0 / s.y[0]
    report = semi_infinite_constraint(s.with_values(x, s.y))
    assert report.correction_norm < 1e-12
    assert report.uncorrected < 1e-12


def test_semi_infinite_errors(rng):
    s = nonzero_y_state(rng, SemiInfinite(8))
    y = s.y.copy()
    y[0] = 0
    with pytest.raises(ZeroY):
        correction_matrix(s.with_values(s.x, y))
    with pytest.raises(ValueError):
        semi_infinite_constraint(random_state(rng, Periodic(8)))
    with pytest.raises(WindowTooSmall):
        semi_infinite_constraint(nonzero_y_state(rng, SemiInfinite(4)))


# ---------- Integration ----------

def test_short_integration_conserves(rng):
    s = random_state(rng, Periodic(16))
    result = integrate(s, AL_FLOW, 0.1, 1e-3, conserved=[(1, 1), (2, 1), (1, 2)], record_every=10)
    assert result.final.time == pytest.approx(0.1)
    assert len(result.snapshots) == 11
    drift = compute_drift(result.curves)
    assert set(drift) == {"H_AL", "H1_1", "H2_1", "H1_2"}
    assert max(d["max_rel_drift"] for d in drift.values()) < 1e-8


def test_blow_up_flushes_partial_trajectory(rng):
    s = random_state(rng, Periodic(8))
    x, y = s.x.copy(), s.y.copy()
    x[2], y[2] = 1.0, 1.0
    flushed = []
    with pytest.raises(BlowUp):
        integrate(s.with_values(x, y), AL_FLOW, 0.1, 1e-3, flush=flushed.append)
    assert len(flushed) == 1
    assert flushed[0].halted


@pytest.mark.slow
def test_periodic_64_conservation(rng):
    s = random_state(rng, Periodic(64))
    conserved = [(k, i) for k in (1, 2) for i in range(1, 5)]
    result = integrate(s, AL_FLOW, 1.0, 1e-3, conserved=conserved, record_every=50, keep_snapshots=False)
    drift = compute_drift(result.curves)
    assert max(d["max_rel_drift"] for d in drift.values()) < 1e-8


@pytest.mark.slow
@pytest.mark.parametrize("flow", [(1, 1), (2, 1), (1, 2), (2, 2), (1, 3)])
def test_hamiltonian_flows_conserve_the_hierarchy(rng, flow):
    s = random_state(rng, Periodic(16))
    conserved = [(k, i) for k in (1, 2) for i in range(1, 5)]
    result = integrate(s, flow, 0.5, 1e-3, conserved=conserved, record_every=50, keep_snapshots=False)
    drift = compute_drift(result.curves)
    assert max(d["max_rel_drift"] for d in drift.values()) < 1e-8
