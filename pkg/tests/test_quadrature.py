import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate as sp_integrate
from scipy.special import roots_jacobi

from gegenrates.closed_forms import InteriorSingularity, interior_coefficients, truncated_power5_coefficients
from gegenrates.errors import DomainError
from gegenrates.gegenbauer_core import eval_C, eval_C_row, norm_h
from gegenrates.quadrature import (
    PiecewiseFn,
    composite_integrate,
    composite_nodes,
    gauss_gegenbauer_rule,
    gauss_jacobi,
    integrate,
)


def weight_mass(lam):
    return math.sqrt(math.pi) * math.gamma(lam + 0.5) / math.gamma(lam + 1.0)


@pytest.mark.parametrize("lam", [-0.4, 0.25, 0.5, 1.0, 3.0])
def test_single_node_rule(lam):
    rule = gauss_gegenbauer_rule(lam, 1)
    assert rule.nodes[0] == 0.0
    assert rule.weights[0] == pytest.approx(weight_mass(lam), rel=1e-13)


def test_legendre_five_points_x8():
    rule = gauss_gegenbauer_rule(0.5, 5)
    assert integrate(rule, lambda x: x**8) == pytest.approx(2.0 / 9.0, rel=1e-14)


def test_squared_c3_gives_norm():
    lam = 1.25
    rule = gauss_gegenbauer_rule(lam, 40)
    val = integrate(rule, lambda x: eval_C(lam, 3, x) ** 2)
    assert val == pytest.approx(norm_h(lam, 3), rel=1e-13)


@pytest.mark.parametrize("lam,m", [(-0.4, 7), (0.5, 64), (1.0, 33), (2.5, 200), (-0.2, 1000)])
def test_rule_invariants(lam, m):
    rule = gauss_gegenbauer_rule(lam, m)
    x, w = rule.nodes, rule.weights
    assert np.all(np.diff(x) > 0)
    assert np.all(w > 0)
    assert np.max(np.abs(x + x[::-1])) < 1e-13
    assert np.max(np.abs(w - w[::-1])) <= 1e-13 * np.max(w)
    assert np.sum(w) == pytest.approx(weight_mass(lam), rel=1e-12)


@pytest.mark.parametrize("lam", [-0.4, 0.3, 1.0, 2.5])
def test_nodes_are_zeros_and_agree_with_scipy(lam):
    m = 30
    rule = gauss_gegenbauer_rule(lam, m)
    assert np.max(np.abs(eval_C(lam, m, rule.nodes))) < 1e-10 * abs(eval_C(lam, m, 1.0))
    xs, ws = roots_jacobi(m, lam - 0.5, lam - 0.5)
    np.testing.assert_allclose(rule.nodes, xs, atol=1e-14)
    np.testing.assert_allclose(rule.weights, ws, rtol=1e-12)


@given(lam=st.floats(-0.45, 4.0), m=st.integers(1, 40), deg=st.integers(0, 79))
def test_polynomial_exactness(lam, m, deg):
    deg = min(deg, 2 * m - 1)
    rule = gauss_gegenbauer_rule(lam, m)
    # monomials against the weight: zero for odd powers, a beta function otherwise
    if deg % 2:
        exact = 0.0
    else:
        exact = math.exp(math.lgamma(deg / 2 + 0.5) + math.lgamma(lam + 0.5) - math.lgamma(deg / 2 + lam + 1.0))
    got = integrate(rule, lambda x: x**deg)
    assert abs(got - exact) <= 1e-12 * max(abs(exact), weight_mass(lam) * 1e-3)


def test_integrate_examples():
    rule = gauss_gegenbauer_rule(0.5, 64)
    assert integrate(rule, lambda x: np.ones_like(x)) == pytest.approx(np.sum(rule.weights), rel=1e-15)
    assert abs(integrate(rule, lambda x: x)) < 1e-13
    assert integrate(rule, np.exp) == pytest.approx(math.e - 1.0 / math.e, rel=1e-14)


@pytest.mark.parametrize("lam", [-0.4, 0.5, 1.0, 2.5])
def test_orthogonality_oracle(lam):
    rule = gauss_gegenbauer_rule(lam, 64)
    rows = eval_C_row(lam, 40, rule.nodes)
    gram = (rows * rule.weights) @ rows.T
    gram /= norm_h(lam, np.arange(41))[None, :]
    assert np.max(np.abs(gram - np.eye(41))) < 1e-10


def test_endpoint_weights_relative_accuracy():
    # the tiny weights next to +-1 for lam < 1/2 carry full relative precision
    import mpmath as mp

    m, lam = 60, -0.4
    x, w = gauss_jacobi(lam - 0.5, lam - 0.5, m)
    mp.mp.dps = 40
    a = mp.mpf(lam) - mp.mpf(1) / 2
    # Christoffel weight at the largest node from the orthonormal recurrence in high precision
    xi = mp.findroot(lambda t: mp.jacobi(m, a, a, t), mp.mpf(x[-1]))
    total = mp.mpf(0)
    mass = 2 ** (2 * a + 1) * mp.gamma(a + 1) ** 2 / mp.gamma(2 * a + 2)
    for k in range(m):
        hk = (2 ** (2 * a + 1) / (2 * k + 2 * a + 1) * mp.gamma(k + a + 1) ** 2
              / (mp.gamma(k + 2 * a + 1) * mp.factorial(k))) if k else mass
        total += mp.jacobi(k, a, a, xi) ** 2 / hk
    assert abs(x[-1] - float(xi)) < 1e-15
    assert w[-1] == pytest.approx(float(1 / total), rel=1e-13)


def test_rule_size_limits():
    with pytest.raises(ValueError):
        gauss_gegenbauer_rule(1.0, 4001)
    with pytest.raises(DomainError):
        gauss_jacobi(-1.0, 0.0, 5)
    with pytest.raises(ValueError):
        gauss_jacobi(0.0, 0.0, 0)


def test_rules_are_read_only():
    rule = gauss_gegenbauer_rule(0.75, 12)
    with pytest.raises(ValueError):
        rule.nodes[0] = 0.0


def test_piecewise_validation():
    with pytest.raises(DomainError):
        PiecewiseFn(np.abs, breakpoints=(0.5, 0.1))
    with pytest.raises(DomainError):
        PiecewiseFn(np.abs, breakpoints=(1.0,))
    with pytest.raises(DomainError):
        PiecewiseFn(np.abs, breakpoints=(0.0, 0.0))
    with pytest.raises(DomainError):
        PiecewiseFn(np.abs, breakpoints=(0.0,), singular_points=(0.3,))
    f = PiecewiseFn(np.abs, breakpoints=(0.0,), smoothness_m=1)
    assert not f.is_analytic
    assert PiecewiseFn(np.exp).is_analytic


def test_composite_without_breakpoints_matches_global_rule():
    lam = 0.8
    f = PiecewiseFn(np.cos)
    g = lambda x: eval_C(lam, 6, x)
    rule = gauss_gegenbauer_rule(lam, 64)
    direct = integrate(rule, lambda x: np.cos(x) * g(x))
    assert composite_integrate(lam, f, g, 64) == pytest.approx(direct, rel=1e-12, abs=1e-15)


def test_composite_truncated_power5():
    lam, k = 0.8, 10
    f = PiecewiseFn(lambda x: np.where(x > 0, x, 0.0) ** 5, breakpoints=(0.0,), smoothness_m=5)
    val = composite_integrate(lam, f, lambda x: eval_C(lam, k, x), 64) / norm_h(lam, k)
    assert val == pytest.approx(truncated_power5_coefficients(lam, k), rel=1e-10)


def test_composite_interior_power():
    lam, k = 0.75, 12
    s = InteriorSingularity(0.25, 1.5)
    f = PiecewiseFn(s, breakpoints=(0.25,), smoothness_m=2, singular_points=(0.25,))
    val = composite_integrate(lam, f, lambda x: eval_C(lam, k, x), 64) / norm_h(lam, k)
    assert val == pytest.approx(interior_coefficients(s, lam, k), rel=1e-8)


def test_composite_against_adaptive_scipy():
    # independent oracle: scipy.integrate.quad on each panel with the algebraic weight
    lam, k, theta = 1.3, 7, -0.3
    f = PiecewiseFn(lambda x: np.abs(x - theta) ** 2.5, breakpoints=(theta,), singular_points=(theta,))
    g = lambda x: eval_C(lam, k, x)
    e = lam - 0.5
    ref = 0.0
    for a, b in ((-1.0, theta), (theta, 1.0)):
        ref += sp_integrate.quad(lambda t: float(f(t) * g(t)) * (1 - t * t) ** e, a, b,
                                 limit=400, epsabs=1e-14, epsrel=1e-12)[0]
    assert composite_integrate(lam, f, g, 64) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("lam", [-0.3, 0.5, 2.0])
@pytest.mark.parametrize("fid", ["f4", "f5", "f6"])
def test_panel_refinement(lam, fid):
    from gegenrates.experiments import parse_function

    spec = parse_function(fid)
    k = np.arange(0, 101)
    x1, w1 = composite_nodes(lam, spec.fn.breakpoints, 64, spec.fn.singular_points)
    x2, w2 = composite_nodes(lam, spec.fn.breakpoints, 128, spec.fn.singular_points)
    a1 = eval_C_row(lam, 100, x1) @ (w1 * spec.fn(x1)) / norm_h(lam, k)
    a2 = eval_C_row(lam, 100, x2) @ (w2 * spec.fn(x2)) / norm_h(lam, k)
    scale = np.sqrt(norm_h(lam, k))
    assert np.max(np.abs(a1 - a2) * scale) < 1e-9 * np.max(np.abs(a2) * scale)


def test_composite_breakpoint_order_error():
    with pytest.raises(DomainError):
        composite_nodes(0.5, (0.2, -0.2))
