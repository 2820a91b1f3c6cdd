from math import factorial

import mpmath
import numpy as np
import pytest

import frobenius.theta as theta_module
from frobenius.brackets import (
    first_bracket,
    pencil_flatness,
    recursion_check,
    second_bracket,
    unit_exactness_defect,
)
from frobenius.canonical import canonical_coords, idempotent_defect
from frobenius.prepotential import (
    ETA,
    F0_third,
    prepotential_F0,
    quasi_homogeneity_defect,
    unit_euler_bracket,
    unit_flatness_defect,
)
from frobenius.residues import contour_tensor, residue_c, residue_eta
from frobenius.structure import intersection_closed, intersection_form, wdvv_check
from frobenius.theta import (
    THETA_TOL,
    levelt_residuals,
    momentum_distance,
    momentum_points,
    theta_recursion_residual,
    theta_series,
    theta_value,
)
from hydro.charts import ModuliPoint, VW_CHART, random_t_points, random_vw_points
from hydro.densities import density_h
from utils.errors import BranchCut, DomainError


@pytest.fixture
def points():
    return random_t_points(np.random.default_rng(19), 20)


def f0_mp(t1, t2):
    return t2 * t1 ** 2 / 2 + mpmath.exp(t2) * t1 + t1 ** 2 * mpmath.log(t1) / 2


# ---------- Metric and product ----------

def test_residue_metric_is_constant(points):
    for pt in points:
        np.testing.assert_allclose(residue_eta(pt), ETA, atol=1e-10)


def test_contour_metric_matches_residues(points):
    for pt in points[:5]:
        np.testing.assert_allclose(contour_tensor(pt, 2), residue_eta(pt), atol=1e-8)


def test_residue_product_matches_prepotential(points):
    for pt in points:
        c = residue_c(pt)
        np.testing.assert_allclose(c, F0_third(pt), atol=1e-8 * max(1.0, np.max(np.abs(c))))


def test_prepotential_third_derivatives_against_mpmath(points):
    mpmath.mp.dps = 30
    try:
        for pt in points[:3]:
            t1, t2 = (float(z.real) for z in pt.t)
            c = F0_third(pt)
            for i, j, k in np.ndindex(2, 2, 2):
                order = (3 - (i + j + k), i + j + k)
                want = complex(mpmath.diff(f0_mp, (t1, t2), order))
                assert c[i, j, k] == pytest.approx(want, rel=1e-12, abs=1e-12)
    finally:
        mpmath.mp.dps = 15


def test_prepotential_branch_cut():
    with pytest.raises(BranchCut):
        prepotential_F0(ModuliPoint.from_t(-0.5, 0.0))


def test_third_derivatives_hold_on_negative_t1():
    # real v, w < 0 puts t1 = e^v (e^w - 1) on the negative axis
    for pt in random_vw_points(np.random.default_rng(23), 10):
        t1, _ = pt.t
        assert t1.real < 0
        np.testing.assert_allclose(F0_third(pt), residue_c(pt), rtol=1e-9, atol=1e-9)
    with pytest.raises(DomainError):
        F0_third(ModuliPoint.from_t(0.0, 0.3))


@pytest.mark.parametrize("chart", ["t", VW_CHART])
def test_wdvv(points, chart):
    assert max(wdvv_check(pt, chart) for pt in points) < 1e-10


def test_unit_and_euler(points):
    for pt in points:
        assert np.max(np.abs(unit_euler_bracket(pt))) < 1e-10
        assert quasi_homogeneity_defect(pt) < 1e-9
    # the unit is not covariantly constant
    assert min(unit_flatness_defect(pt) for pt in points) > 0.01


def test_canonical_coordinates(points):
    for pt in points:
        t1, t2 = pt.t
        u = canonical_coords(pt)
        assert u.u1 + u.u2 == pytest.approx(2 * (np.exp(t2) + t1), rel=1e-12)
        assert u.u1 * u.u2 == pytest.approx((np.exp(t2) - t1) ** 2, rel=1e-12)
        assert idempotent_defect(pt) < 1e-10


# ---------- Intersection form / brackets ----------

def test_intersection_form(points):
    two = second_bracket()
    for pt in points:
        t1, t2 = pt.t
        g = intersection_form(pt, tol=np.inf)
        np.testing.assert_allclose(g, intersection_closed(pt), atol=1e-10 * max(1.0, np.max(np.abs(g))))
        np.testing.assert_allclose(g, two.metric(t1, t2), atol=1e-10 * max(1.0, np.max(np.abs(g))))
        assert np.linalg.det(g) == pytest.approx(-pt.a ** 2, rel=1e-10)


def test_first_metric_is_eta(points):
    t1, t2 = points[0].t
    np.testing.assert_allclose(first_bracket().metric(t1, t2), ETA)


def test_pencil_is_flat_but_not_exact(points):
    for pt in points:
        assert max(pencil_flatness(pt).values()) < 1e-6
    assert min(unit_exactness_defect(pt) for pt in points) > 0.05


@pytest.mark.parametrize("n", range(1, 6))
def test_bihamiltonian_recursion(points, n):
    for pt in points:
        assert max(recursion_check(n, pt).values()) < 1e-10


def test_recursion_order_is_bounded(points):
    with pytest.raises(ValueError):
        recursion_check(6, points[0])


# ---------- Theta series ----------

@pytest.mark.parametrize("p", range(5))
def test_levelt_recursions(points, p):
    for pt in points[:10]:
        assert max(levelt_residuals(p, pt).values()) < 1e-8


def test_theta2_generating_function():
    for pt in random_vw_points(np.random.default_rng(23), 10):
        series = theta_series(2, 6, pt)
        assert series.route_gap < 1e-10
        for p, coeff in enumerate(series.coefficients):
            assert coeff == pytest.approx(density_h(1, p + 1, pt) / factorial(p), abs=1e-10)
            assert theta_value(2, p, pt) == pytest.approx(coeff, rel=1e-10, abs=1e-12)


def test_printed_theta2_gap_is_recorded_and_warned(monkeypatch):
    warnings = []
    monkeypatch.setattr(theta_module.log, "warning", lambda msg, *args: warnings.append(msg % args))
    series = theta_series(2, 6, ModuliPoint.from_vw(0.2, -0.8))
    assert series.printed_gap is not None
    assert bool(warnings) == (series.printed_gap > THETA_TOL)


def test_theta_series_limits(points):
    with pytest.raises(ValueError):
        theta_series(1, 3, points[0])
    with pytest.raises(ValueError):
        theta_series(2, 7, points[0])
    with pytest.raises(ValueError):
        theta_series(3, 1, points[0])


def test_theta_recursion(points):
    for pt in points[:10]:
        assert max(theta_recursion_residual(1, p, pt) for p in range(2)) < 1e-8
        assert max(theta_recursion_residual(2, p, pt) for p in range(5)) < 1e-8


def test_momentum_density_is_not_a_theta():
    assert min(momentum_distance(momentum_points()).values()) > 0.1
