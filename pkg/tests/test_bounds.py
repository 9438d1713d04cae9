import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate as sp_integrate

from gegenrates.bounds import (
    D_factor,
    EllipseSpec,
    RatioDirection,
    analytic_error_bound,
    analytic_error_bound_incomplete,
    bernstein_rho,
    coefficient_bound,
    critical_point_exponents,
    derivative_error_bound,
    ellipse_circumference,
    ellipse_max_modulus,
    ellipse_spec,
    fit_rate,
    gamma_ratio,
    gamma_ratio_bound,
    interior_rate_exponent,
    kernel_scaling_exponent,
    negative_lambda_constant,
    piecewise_rate_exponent,
    psi,
)
from gegenrates.closed_forms import pole_coefficients
from gegenrates.errors import DomainError
from gegenrates.gegenbauer_core import dirichlet_kernel, eval_C_row

GAMMAS = [-0.5, 0.3, 1.0, 2.7]


# ------------------------------------------------------- gamma ratios


def test_gamma_ratio_examples():
    k = np.arange(1, 50)
    np.testing.assert_allclose(gamma_ratio(k, 1.0), 1.0, rtol=1e-14)
    np.testing.assert_allclose(gamma_ratio_bound(k, 1.0), 1.0, rtol=1e-15)
    assert gamma_ratio_bound(1, 0.5) == pytest.approx(1 / math.gamma(1.5), rel=1e-15)
    assert gamma_ratio(1, 0.5) == pytest.approx(gamma_ratio_bound(1, 0.5), rel=1e-14)


def test_psi_approaches_one_from_below():
    ks = np.array([1e3, 1e4, 1e5, 1e6])
    vals = psi(ks, 2.5)
    assert np.all(vals < 1)
    assert np.all(np.diff(vals) > 0)
    assert 1 - vals[-1] < 1e-5


@pytest.mark.parametrize("g", GAMMAS)
@pytest.mark.parametrize("direction", list(RatioDirection))
def test_gamma_ratio_dominance(g, direction):
    k = np.arange(1, 2001)
    assert np.all(gamma_ratio(k, g, direction) <= gamma_ratio_bound(k, g, direction) * (1 + 1e-12))


@pytest.mark.parametrize("g", GAMMAS)
def test_psi_monotone_direction(g):
    vals = psi(np.arange(1, 1001), g)
    steps = np.diff(vals)
    if 0 < g < 1:
        assert np.all(steps < 0)
    elif g == 1:
        np.testing.assert_allclose(vals, 1.0, rtol=1e-13)
    else:
        assert np.all(steps > 0)


@pytest.mark.parametrize("g", GAMMAS)
def test_gamma_ratio_attainment(g):
    # the ratio1 bound is sharp at k = 1 inside [0, 1) and as k -> infinity outside
    b1, r1 = gamma_ratio_bound(1, g), gamma_ratio(1, g)
    big = 10.0**13
    rb, bb = gamma_ratio(big, g), gamma_ratio_bound(big, g)
    if 0 <= g < 1:
        assert r1 == pytest.approx(b1, rel=1e-12)
    else:
        assert rb / bb == pytest.approx(1.0, abs=1e-12)


def test_gamma_ratio_bound_domain():
    with pytest.raises(DomainError):
        gamma_ratio_bound(3, -1.0)
    with pytest.raises(DomainError):
        gamma_ratio_bound(0, 0.5)


# ------------------------------------------------------------ ellipses


def test_circumference_limits():
    rho = 1e6
    assert ellipse_circumference(rho) / (math.pi * rho) == pytest.approx(1.0, rel=1e-10)
    assert ellipse_circumference(1 + 1e-9) == pytest.approx(4.0, rel=1e-8)


def test_circumference_against_arc_length():
    rho = 2.0
    a, b = 0.5 * (rho + 1 / rho), 0.5 * (rho - 1 / rho)
    arc, _ = sp_integrate.quad(lambda t: math.hypot(a * math.sin(t), b * math.cos(t)), 0, 2 * math.pi,
                               epsabs=1e-14, epsrel=1e-13, limit=200)
    assert ellipse_circumference(rho) == pytest.approx(arc, rel=1e-10)


@given(st.floats(1.0001, 50.0))
def test_circumference_band(rho):
    spec = ellipse_spec(rho, 1.0)
    a, b = spec.semi_axes
    assert max(4 * a, 2 * math.pi * b) * (1 - 1e-12) <= spec.L <= 2 * math.pi * a * (1 + 1e-12)


def test_ellipse_spec_validation():
    with pytest.raises(DomainError):
        ellipse_spec(1.0, 1.0)
    with pytest.raises(DomainError):
        EllipseSpec(2.0, -1.0, 1.0)


def test_max_modulus_pole():
    rho, omega = 2.0, 1.5
    a = 0.5 * (rho + 1 / rho)
    # the ellipse crosses the real axis at +-a; the nearest point to the pole is a
    m = ellipse_max_modulus(lambda z: 1 / (z - omega), rho)
    assert m == pytest.approx(1 / abs(a - omega), rel=1e-12)


def test_bernstein_rho_examples():
    assert bernstein_rho(1.5) == pytest.approx(1.5 + math.sqrt(1.25), rel=1e-15)
    assert bernstein_rho(0.0, 1 / 3) == pytest.approx((1 + math.sqrt(10)) / 3, rel=1e-14)
    assert bernstein_rho(0.0, -1 / 3) == pytest.approx((1 + math.sqrt(10)) / 3, rel=1e-14)
    assert bernstein_rho(-1.2) == pytest.approx(1.2 + math.sqrt(0.44), rel=1e-14)
    with pytest.raises(DomainError):
        bernstein_rho(0.3)


@given(st.floats(-3, 3), st.floats(0.01, 3))
def test_bernstein_rho_lies_on_ellipse(re, im):
    rho = bernstein_rho(re, im)
    a, b = 0.5 * (rho + 1 / rho), 0.5 * (rho - 1 / rho)
    assert (re / a) ** 2 + (im / b) ** 2 == pytest.approx(1.0, rel=1e-9)


# ------------------------------------------ coefficient and error bounds


def _pole_spec(omega, shrink=1e-6):
    rho = bernstein_rho(omega) * (1 - shrink)
    return ellipse_spec(rho, ellipse_max_modulus(lambda z: 1 / (z - omega), rho))


def test_D_factor_lambda_one():
    spec = ellipse_spec(2.0, 3.0)
    assert D_factor(1.0, spec) == pytest.approx(3.0 * spec.L / (2 * math.pi), rel=1e-15)


def test_D_factor_branches_near_one():
    spec = ellipse_spec(2.0, 1.0)
    below, above = D_factor(1.0 - 1e-12, spec), D_factor(1.0 + 1e-12, spec)
    # the middle branch at lam = 1 gives M L/(pi rho); the upper one gives Gamma(1)(1 + rho^-2)^0 as well
    assert below == pytest.approx(above, rel=1e-9)
    assert D_factor(0.5, spec) != D_factor(1.5, spec)


def test_D_factor_negative_lambda_against_mpmath():
    lam, rho = -0.25, 2.0
    spec = ellipse_spec(rho, 1.0)
    with mp.workdps(30):
        lam_m, r = mp.mpf(lam), mp.mpf(rho)
        ref = (spec.M * mp.mpf(spec.L) / (mp.pi * r) * abs(mp.gamma(lam_m)) * mp.gamma(1 + lam_m)
               * mp.gamma(1 - 2 * lam_m) / mp.gamma(1 - lam_m) * (1 - r**-2) ** (2 * lam_m - 1))
    assert D_factor(lam, spec) == pytest.approx(float(ref), rel=1e-13)


def test_coefficient_bound_algebra():
    spec = ellipse_spec(2.0, 1.0)
    assert coefficient_bound(1.0, spec, 1) == pytest.approx(D_factor(1.0, spec) / 2.0, rel=1e-15)
    for lam in (0.3, 2.5):
        k = np.arange(1, 200)
        b = coefficient_bound(lam, spec, k)
        np.testing.assert_allclose(b[1:] / b[:-1], (1 + 1 / k[:-1]) ** (1 - lam) / 2.0, rtol=1e-12)


@pytest.mark.parametrize("omega,lam", [(1.5, 1.0), (1.2, -0.3), (2.0, 2.5), (1.5, 0.4)])
def test_coefficient_bound_dominates_pole(omega, lam):
    spec = _pole_spec(omega)
    a = pole_coefficients(omega, lam, 100)
    b = coefficient_bound(lam, spec, np.arange(101))
    assert np.all(np.abs(a) <= b)


def test_incomplete_gamma_route():
    spec = _pole_spec(1.5, 1e-3)
    lam = 1.0
    for n in (25, 40, 80):
        inter = analytic_error_bound_incomplete(lam, spec, n)
        final = analytic_error_bound(lam, spec, n, slack=1.05)
        # Gamma(2, x) = (1 + x) e^-x, so the simplified form needs the 1.05 slack once x >= 20
        assert n * math.log(spec.rho) >= 20
        assert final >= inter * (1 - 1e-9)


def test_analytic_bound_positive_lambda_needs_n_at_least_one():
    spec = ellipse_spec(3.0, 1.0)
    assert math.floor(0.5 / math.log(3.0)) == 0
    with pytest.raises(DomainError):
        analytic_error_bound(0.5, spec, 0)
    assert analytic_error_bound(0.5, spec, 1) > 0


def test_analytic_bound_negative_lambda_at_zero():
    spec = ellipse_spec(2.0, 1.0)
    lam = -0.25
    expected = D_factor(lam, spec) * negative_lambda_constant(lam) / (spec.rho - 1)
    assert analytic_error_bound(lam, spec, 0) == pytest.approx(expected, rel=1e-15)


def test_analytic_bound_precondition():
    spec = ellipse_spec(1.2, 1.0)
    n_min = math.floor(3.0 / math.log(1.2))
    with pytest.raises(DomainError):
        analytic_error_bound(3.0, spec, n_min - 1)
    analytic_error_bound(3.0, spec, n_min)


def test_derivative_bound_reduces_to_error_bound():
    spec = ellipse_spec(1.8, 2.0)
    assert derivative_error_bound(1.0, spec, 30, 0) == analytic_error_bound(1.0, spec, 30)
    assert derivative_error_bound(1.0, spec, 30, 2) > derivative_error_bound(1.0, spec, 30, 1)


def test_negative_lambda_constant_generalizes():
    lam = -0.3
    c = negative_lambda_constant(lam)
    x = np.linspace(-1, 1, 2001)
    rows = eval_C_row(lam, 900, x)[600:]
    n = np.arange(600, 901)
    assert np.all(np.abs(rows).max(axis=1) <= c * n ** (lam - 1.0))
    with pytest.raises(DomainError):
        negative_lambda_constant(0.3)


# ------------------------------------------------------------ exponents


def test_piecewise_rate_examples():
    assert piecewise_rate_exponent(0.5, 4) == -4
    assert piecewise_rate_exponent(3.0, 5) == -3
    assert piecewise_rate_exponent(1.0, 3) == -3
    assert piecewise_rate_exponent(1.5, 4) == -3.5
    with pytest.raises(DomainError):
        piecewise_rate_exponent(5.0, 4)


def test_interior_and_critical_exponents():
    assert interior_rate_exponent(0.5, 2.5) == -2.5
    assert interior_rate_exponent(3.0, 2.5) == pytest.approx(-0.5)
    assert critical_point_exponents(2.0, 1.5) == (-0.5, -1.5)


def test_kernel_scaling_examples():
    assert kernel_scaling_exponent(-0.25, "global") == 1
    assert kernel_scaling_exponent(2.0, "interior") == 2
    assert kernel_scaling_exponent(0.5, "interior") == 1
    with pytest.raises(ValueError):
        kernel_scaling_exponent(1.0, "edge")


def test_kernel_scaling_empirical():
    lam = 1.5
    g = np.cos(np.linspace(0, np.pi, 121))
    X, T = np.meshgrid(g, g)
    ns = [16, 32, 64, 128, 256]
    maxima = [float(np.max(np.abs(dirichlet_kernel(lam, n, X.ravel(), T.ravel())))) for n in ns]
    fit = fit_rate(list(zip(ns, maxima)))
    assert abs(fit.exponent - kernel_scaling_exponent(lam, "global")) < 0.2


# ---------------------------------------------------------------- fits


def test_fit_rate_algebraic_exact():
    n = np.arange(5, 60)
    fit = fit_rate(list(zip(n, n**-3.0)))
    assert fit.exponent == pytest.approx(-3.0, abs=1e-12)
    assert fit.residual < 1e-12
    assert fit.n_range == (5, 59)
    assert fit.geometric_base is None


def test_fit_rate_geometric_synthetic():
    n = np.arange(5, 60)
    fit = fit_rate(list(zip(n, 2.0**-n * n**2)), "geometric_times_power")
    assert fit.geometric_base == pytest.approx(2.0, rel=1e-10)
    assert fit.exponent == pytest.approx(2.0, abs=1e-8)


def test_fit_rate_degenerate():
    with pytest.raises(DomainError):
        fit_rate([(n, 1e-16) for n in range(5, 20)])
    with pytest.raises(DomainError):
        fit_rate([(5, 1.0), (6, 0.5)])
    with pytest.raises(ValueError):
        fit_rate([(5, 1.0)] * 6, "exotic")
