import cmath
import math

import mpmath
import numpy as np
import pytest

from hydro.charts import ModuliPoint, random_vw_points
from mirror.deformed import dual_deformed_flatness, select_kappa
from mirror.dual import (
    dual_c,
    dual_prepotential,
    dual_product,
    dual_unit,
    dual_wdvv,
    g_invariance_defect,
    nonhomogeneity_residual,
)
from mirror.periods import (
    CLOSED_FORM,
    CONTOUR,
    elliptic_specialization,
    half_period_reflection,
    route_gap,
    topological_closed,
    topological_transform,
    twisted_period_closed,
    twisted_period_contour,
)
from specfun.elliptic import PARAMETER
from utils.errors import DomainError, IntegerZ

PERIOD_POINTS = [ModuliPoint.from_vw(v, w) for v, w in
                 [(0.2, -0.8), (0.0, -1.0), (-0.3, -0.5), (0.5, -1.5), (0.1, -0.3)]]


@pytest.fixture
def points():
    return random_vw_points(np.random.default_rng(29), 20)


# ---------- Almost-dual structure ----------

def test_dual_structure_constants(points):
    for pt in points:
        c = dual_c(pt)
        _, w = pt.vw
        assert c[0, 0, 1] == pytest.approx(1.0, abs=1e-9)
        assert c[1, 1, 1] == pytest.approx(-cmath.exp(w) / (1 - cmath.exp(w)), rel=1e-9)
        assert c[0, 0, 0] == pytest.approx(0.0, abs=1e-9)


def test_dual_prepotential_value():
    pt = ModuliPoint.from_vw(0.4, -0.9)
    want = 0.5 * 0.4 ** 2 * -0.9 - complex(mpmath.polylog(3, math.exp(-0.9)))
    assert dual_prepotential(pt) == pytest.approx(want, abs=1e-12)


def test_dual_wdvv(points):
    assert max(dual_wdvv(pt) for pt in points) < 1e-10


def test_euler_field_is_dual_unit(points):
    rng = np.random.default_rng(1)
    for pt in points:
        y = rng.normal(size=2) + 1j * rng.normal(size=2)
        np.testing.assert_allclose(dual_product(pt, dual_unit(pt), y), y, atol=1e-12)


def test_dual_product_is_invariant(points):
    rng = np.random.default_rng(2)
    for pt in points[:5]:
        x, y, z = (rng.normal(size=2) for _ in range(3))
        assert g_invariance_defect(pt, x, y, z) < 1e-10


def test_dual_prepotential_is_not_quasi_homogeneous():
    pts = random_vw_points(np.random.default_rng(3), 12, w_range=(-4.0, -0.3))
    assert nonhomogeneity_residual(pts) > 0.01


# ---------- Periods ----------

@pytest.mark.parametrize("alpha", [1, 2])
@pytest.mark.parametrize("z", [-0.25, -0.5, -0.75])
def test_contour_matches_closed_form(alpha, z):
    for pt in PERIOD_POINTS:
        assert route_gap(alpha, z, pt) < 1e-6


def test_period_routes_are_labelled():
    pt = PERIOD_POINTS[0]
    assert twisted_period_closed(1, -0.5, pt).route == CLOSED_FORM
    assert twisted_period_contour(2, -0.5, pt).route == CONTOUR


def test_periods_at_zero():
    pt = PERIOD_POINTS[1]
    assert twisted_period_closed(1, 0.0, pt).value == 0
    assert twisted_period_closed(2, 0.0, pt).value == pytest.approx(1.0)


def test_period_domain_errors():
    pt = PERIOD_POINTS[0]
    with pytest.raises(DomainError):
        twisted_period_contour(1, 0.3, pt)
    with pytest.raises(DomainError):
        twisted_period_contour(1, -0.5, ModuliPoint.from_vw(0.0, 0.5))
    with pytest.raises(DomainError):
        twisted_period_closed(2, 0.5, ModuliPoint.from_vw(0.0, 0.5))
    with pytest.raises(ValueError):
        twisted_period_closed(3, 0.5, pt)


def test_half_period_reflection():
    for pt in PERIOD_POINTS:
        for alpha in (1, 2):
            want = half_period_reflection(alpha, pt)
            got = twisted_period_contour(alpha, -0.5, pt).value
            assert abs(got - want) <= 1e-6 * max(1.0, abs(want))


def test_elliptic_specialization(points):
    for pt in points:
        report = elliptic_specialization(pt)
        assert report.gap < 1e-10
        assert report.convention == PARAMETER
        v, w = pt.vw
        m = 1 - math.exp(w.real)
        want = 2 / math.pi * cmath.exp(v / 2) * float(mpmath.ellipk(m) - mpmath.ellipe(m))
        assert report.p1 == pytest.approx(want, rel=1e-10)


def test_topological_transform():
    for z in (-0.25, -0.5, -0.75, 0.3):
        for pt in PERIOD_POINTS:
            report = topological_transform(z, pt)
            assert report.gap < 1e-9


def test_topological_small_z_limit():
    # (F e^(zv) - 1) / z -> v as z -> 0
    pt = ModuliPoint.from_vw(0.3, -0.7)
    _, p2 = topological_closed(1e-6, pt)
    assert p2 == pytest.approx(0.3, abs=1e-4)


def test_topological_rejects_integer_z():
    with pytest.raises(IntegerZ):
        topological_transform(1, PERIOD_POINTS[0])


def test_deformed_flatness():
    kappa = select_kappa(PERIOD_POINTS[:3])
    for z in (0.3, -0.25):
        for pt in PERIOD_POINTS:
            assert max(dual_deformed_flatness(z, pt, kappa).values()) < 1e-5
