import math

import mpmath
import numpy as np
import pytest

from specfun.elliptic import MODULUS, elliptic_E, elliptic_K
from specfun.hypergeometric import gauss_2f1, humbert_psi2, pochhammer, psi2_diagonals
from specfun.polylog import polylog
from specfun.quadrature import adaptive_quadrature, circle_integral
from specfun.series import SeriesControl, nonpositive_integer
from utils.errors import BranchCut, ConfigError, DomainError, NoConvergence, PoleAtC


def close(got, want, tol):
    return abs(complex(got) - complex(want)) <= tol * max(1.0, abs(complex(want)))


# ---------- Pochhammer / 2F1 ----------

@pytest.mark.parametrize("a, n, want", [(1, 5, 120), (0.5, 0, 1), (-2, 3, 0), (3, 2, 12)])
def test_pochhammer_values(a, n, want):
    assert pochhammer(a, n) == pytest.approx(want)


def test_pochhammer_rejects_negative_order():
    with pytest.raises(ValueError):
        pochhammer(1.0, -1)


def test_nonpositive_integer():
    assert nonpositive_integer(-3) == 3
    assert nonpositive_integer(0) == 0
    assert nonpositive_integer(-2.5) is None
    assert nonpositive_integer(1j) is None


@pytest.mark.parametrize("a, b, c, x", [
    (0.5, 1.5, 2.5, 0.3),
    (1.0, 1.0, 2.0, -0.7),
    (-0.3, 2.2, 1.7, 0.85),
    (1.2, -0.4, 0.6, -0.5 + 0.3j),
])
def test_gauss_2f1_against_mpmath(a, b, c, x):
    want = complex(mpmath.hyp2f1(a, b, c, x))
    assert close(gauss_2f1(a, b, c, x), want, 1e-12)


def test_gauss_2f1_terminating_series_outside_disc():
    # 2F1(-2, b; c; x) = 1 - 2 b x / c + b (b+1) x^2 / (c (c+1))
    b, c, x = 1.5, 2.0, 3.0
    want = 1 - 2 * b * x / c + b * (b + 1) * x ** 2 / (c * (c + 1))
    assert gauss_2f1(-2, b, c, x) == pytest.approx(want)


def test_gauss_2f1_derivative_identity():
    a, b, c, h = 0.7, -1.2, 1.9, 1e-5
    for x in np.linspace(-0.7, 0.7, 20):
        slope = (gauss_2f1(a, b, c, x + h) - gauss_2f1(a, b, c, x - h)) / (2 * h)
        assert close(slope, a * b / c * gauss_2f1(a + 1, b + 1, c + 1, x), 1e-6)


def test_gauss_2f1_errors():
    with pytest.raises(NoConvergence):
        gauss_2f1(0.5, 0.5, 1.5, 1.2)
    with pytest.raises(PoleAtC):
        gauss_2f1(0.5, 0.5, -1, 0.3)


def test_gauss_2f1_tail_bound_near_the_unit_circle():
    # term ratio climbs towards x from below; the stopping rule must not trust the current ratio
    x = 0.999
    want = -math.log1p(-x) / x
    ctl = SeriesControl(tol=1e-8)
    assert abs(gauss_2f1(1, 1, 2, x, ctl) - want) <= ctl.tol * want
    assert close(gauss_2f1(1, 1, 2, x), complex(mpmath.hyp2f1(1, 1, 2, x)), 1e-11)


# ---------- Psi2 ----------

@pytest.mark.parametrize("a, b, c, x, y", [
    (1.0, 1.0, 2.0, 0.4, -0.3),
    (0.7, 1.3, 0.9, -1.2, 0.8),
    (2.0, 2.0, 1.0, 0.5 + 0.2j, -0.6),
])
def test_humbert_psi2_against_mpmath(a, b, c, x, y):
    want = complex(mpmath.hyper2d({"m+n": [a]}, {"m": [b], "n": [c]}, x, y))
    assert close(humbert_psi2(a, b, c, x, y), want, 1e-10)


def test_psi2_diagonals_sum_to_series():
    a, b, c, x, y = 0.8, 1.1, 1.6, 0.5, -0.4
    diagonals = psi2_diagonals(a, b, c, x, y, 60)
    assert close(sum(diagonals), humbert_psi2(a, b, c, x, y), 1e-12)
    assert diagonals[0] == 1
    assert diagonals[1] == pytest.approx(a * (x / b + y / c))


@pytest.mark.parametrize("a, b, c, x, y", [
    (1.5, 0.7, 1.2, 4.0, -3.0),
    (2.0, 0.6, 1.8, 3.0, 2.5),
])
def test_humbert_psi2_large_arguments_meet_tolerance(a, b, c, x, y):
    want = complex(mpmath.hyper2d({"m+n": [a]}, {"m": [b], "n": [c]}, x, y))
    ctl = SeriesControl(tol=1e-9)
    got = humbert_psi2(a, b, c, x, y, ctl)
    assert abs(got - want) <= ctl.tol * max(1.0, abs(got))


def test_humbert_psi2_terminates_for_nonpositive_a():
    # (a)_d = 0 for d > 2: the series is the polynomial of the first three diagonals
    a, b, c, x, y = -2.0, 1.3, 0.8, 0.7, -0.4
    assert close(humbert_psi2(a, b, c, x, y), sum(psi2_diagonals(a, b, c, x, y, 3)), 1e-14)


def test_psi2_rejects_pole_parameters():
    with pytest.raises(PoleAtC):
        humbert_psi2(1.0, 0.0, 1.0, 0.1, 0.1)
    with pytest.raises(PoleAtC):
        psi2_diagonals(1.0, 1.0, -2.0, 0.1, 0.1, 4)


def test_psi2_reports_exhausted_terms():
    with pytest.raises(NoConvergence):
        humbert_psi2(1.0, 1.0, 1.0, 30.0, 30.0, SeriesControl(max_terms=5))


def test_series_control_validation():
    with pytest.raises(ConfigError):
        SeriesControl(tol=0.0)
    with pytest.raises(ConfigError):
        SeriesControl(max_terms=0)


# ---------- Polylog ----------

@pytest.mark.parametrize("s", [0, 1, 2, 3])
@pytest.mark.parametrize("x", [-0.9, -0.3, 0.2, 0.7, 0.3 + 0.4j])
def test_polylog_against_mpmath(s, x):
    assert close(polylog(s, x), complex(mpmath.polylog(s, x)), 1e-12)


def test_polylog_special_values():
    assert polylog(2, 0.5) == pytest.approx(math.pi ** 2 / 12 - math.log(2) ** 2 / 2, rel=1e-13)
    assert polylog(3, 0.0) == 0


@pytest.mark.parametrize("s", [1, 2, 3])
def test_polylog_ladder(s):
    h = 1e-5
    for w in (-3.0, -1.0, -0.2):
        slope = (polylog(s, math.exp(w + h)) - polylog(s, math.exp(w - h))) / (2 * h)
        assert close(slope, polylog(s - 1, math.exp(w)), 1e-6)


def test_polylog_errors():
    with pytest.raises(BranchCut):
        polylog(1, 1.5)
    with pytest.raises(BranchCut):
        polylog(0, 1.0)
    with pytest.raises(DomainError):
        polylog(2, 1.0)
    with pytest.raises(DomainError):
        polylog(4, 0.5)


# ---------- Elliptic ----------

@pytest.mark.parametrize("m", [0.0, 0.1, 0.5, 0.9, 0.999, -2.0])
def test_elliptic_against_mpmath(m):
    assert elliptic_K(m) == pytest.approx(float(mpmath.ellipk(m)), rel=1e-13)
    assert elliptic_E(m) == pytest.approx(float(mpmath.ellipe(m)), rel=1e-13)


def test_elliptic_modulus_convention():
    k = 0.6
    assert elliptic_K(k, MODULUS) == pytest.approx(elliptic_K(k * k), rel=1e-15)
    assert elliptic_E(k, MODULUS) == pytest.approx(elliptic_E(k * k), rel=1e-15)


@pytest.mark.parametrize("m", [0.0, 0.1, 0.5, 0.9])
def test_elliptic_K_is_a_gauss_series(m):
    assert close(elliptic_K(m), math.pi / 2 * gauss_2f1(0.5, 0.5, 1.0, m), 1e-12)


def test_elliptic_domain():
    assert elliptic_E(1.0) == 1.0
    with pytest.raises(DomainError):
        elliptic_K(1.0)
    with pytest.raises(DomainError):
        elliptic_E(1.5)
    with pytest.raises(DomainError):
        elliptic_K(0.5, "nome")


# ---------- Quadrature ----------

@pytest.mark.parametrize("alpha, beta", [(-0.5, -0.5), (0.3, -0.7), (-0.9, 0.0)])
def test_quadrature_endpoint_weights(alpha, beta):
    got = adaptive_quadrature(lambda p: 1.0, 0.0, 1.0, 1e-12, alpha=alpha, beta=beta).value
    assert got == pytest.approx(float(mpmath.beta(alpha + 1, beta + 1)), rel=1e-10)


def test_quadrature_half_line():
    got = adaptive_quadrature(lambda p: math.exp(-p), 0.0, math.inf, 1e-12).value
    assert got == pytest.approx(1.0, rel=1e-10)

    # int_0^inf p^-1/2 / (1 + p) dp = pi
    tail = adaptive_quadrature(lambda p: 1.0 / (1.0 + p), 0.0, math.inf, 1e-12, alpha=-0.5, beta=-1.5)
    assert tail.value == pytest.approx(math.pi, rel=1e-9)


@pytest.mark.parametrize("alpha", [-0.5, -0.3, -0.8])
def test_quadrature_tail_exponent_reaches_the_mapped_endpoint(alpha):
    # int_0^inf p^alpha / (1 + p) dp = pi / sin(pi (alpha + 1)); regular part ~ p^(alpha - 1) at infinity
    calls = []

    def f(p):
        calls.append(p)
        return 1.0 / (1.0 + p)

    got = adaptive_quadrature(f, 0.0, math.inf, 1e-12, alpha=alpha, beta=alpha - 1.0)
    assert got.value == pytest.approx(math.pi / math.sin(math.pi * (alpha + 1.0)), rel=1e-9)
    assert all(math.isfinite(p) for p in calls)


def test_quadrature_rejects_non_integrable_exponents():
    with pytest.raises(NoConvergence):
        adaptive_quadrature(lambda p: 1.0, 0.0, 1.0, alpha=-1.0)
    with pytest.raises(NoConvergence):
        adaptive_quadrature(lambda p: 1.0, 0.0, math.inf, beta=-0.5)


def test_circle_integral_picks_up_residue():
    got = circle_integral(lambda p: 3.0 / (p - 0.2) + p ** 2, 0.0, 1.0, nodes=64)
    assert got == pytest.approx(3.0, abs=1e-13)
