"""The thirteen acceptance criteria, one test each (a few split off an unattainable part).

Run ``pytest tests/test_acceptance.py`` to get the PASS/FAIL table in the
terminal summary. Parts that cannot hold mathematically are strict xfails, so
they show up as FAIL in the table and turn the suite red if they ever start
passing.
"""

import math

import numpy as np
import pytest

from gegenrates.bounds import (
    RatioDirection,
    analytic_error_bound,
    bernstein_rho,
    coefficient_bound,
    fit_rate,
    gamma_ratio,
    gamma_ratio_bound,
    interior_rate_exponent,
    piecewise_rate_exponent,
    psi,
)
from gegenrates.closed_forms import (
    InteriorSingularity,
    endpoint_coefficients,
    endpoint_error_constant,
    interior_asymptotic,
    interior_coefficient_table,
    legendre_chebyshev_ratio,
    pole_coefficients,
    truncated_power5_coefficients,
)
from gegenrates.errors import DomainError
from gegenrates.experiments import FIGURES, _bound_spec, parse_function, run_spectral_diff, run_sweep
from gegenrates.gegenbauer_core import Lambda, eval_C_row, norm_h
from gegenrates.minimax import alternation_count, remez
from gegenrates.projection import compute_series, error_grid, lebesgue_constant, partial_sum_errors, series_with_info
from gegenrates.quadrature import gauss_gegenbauer_rule

RHO_F3 = (1 + math.sqrt(10)) / 3


def check(failures):
    assert not failures, "\n".join(failures)


def projection_exponent(fid, lam, lo=16, hi=250):
    res = run_sweep(parse_function(fid), lam, range(lo, hi + 1), minimax=False)
    return fit_rate([(r.n, r.err_proj) for r in res.rows]).exponent


def test_c01_orthogonality(criterion):
    with criterion(1, "orthogonality oracle", 5):
        failures = []
        for lam in (-0.4, 0.5, 1.0, 2.5):
            rule = gauss_gegenbauer_rule(lam, 64)
            rows = eval_C_row(lam, 40, rule.nodes)
            gram = (rows * rule.weights) @ rows.T / norm_h(lam, np.arange(41))[None, :]
            dev = np.max(np.abs(gram - np.eye(41)))
            if not dev < 1e-10:
                failures.append(f"lambda={lam}: deviation {dev:.2e}")
        check(failures)


def test_c02_closed_forms_vs_quadrature(criterion):
    with criterion(2, "closed-form vs quadrature coefficients", 30):
        failures = []
        s = compute_series(parse_function("endpoint:3/2").fn, 0.75, 50, extended=True)
        exact = np.array([endpoint_coefficients(1.5, 0.75, k) for k in range(51)])
        rel = np.max(np.abs(s.coeffs - exact) / np.abs(exact))
        if not rel < 1e-8:
            failures.append(f"endpoint: {rel:.2e}")
        for lam in (0.8, 2.0):
            s = compute_series(parse_function("tpow:5").fn, lam, 60, extended=True)
            exact = np.array([truncated_power5_coefficients(lam, k) for k in range(61)])
            nz = exact != 0
            # odd k >= 7 vanish exactly; there "relative" can only mean relative to the largest coefficient
            rel = np.max(np.abs(s.coeffs - exact)[nz] / np.abs(exact[nz]))
            zeros = np.max(np.abs(s.coeffs[~nz])) / np.max(np.abs(exact))
            if not (rel < 1e-8 and zeros < 1e-8):
                failures.append(f"tpow:5 lambda={lam}: {rel:.2e}, zeros {zeros:.2e}")
        s = compute_series(parse_function("interior:1/4:3/2").fn, 0.75, 40, extended=True)
        exact = interior_coefficient_table(InteriorSingularity(0.25, 1.5), 0.75, 40)
        rel = np.max(np.abs(s.coeffs - exact) / np.abs(exact))
        if not rel < 1e-6:
            failures.append(f"interior: {rel:.2e}")
        check(failures)


def test_c03_geometric_rate(criterion):
    with criterion(3, "geometric rate for f3", 60):
        failures = []
        for lam in (1.0, 2.0):
            fit = run_sweep(parse_function("f3"), lam, range(10, 101), minimax=False).fit
            if not abs(fit.geometric_base / RHO_F3 - 1) < 0.02:
                failures.append(f"lambda={lam}: base {fit.geometric_base:.6f}")
            if not abs(fit.exponent - lam) < 0.3:
                failures.append(f"lambda={lam}: exponent {fit.exponent:.3f}")
        check(failures)


def test_c04_indicator_bounded(criterion):
    # "last decade" = the final ten degrees of each sweep that carry a defined indicator
    with criterion(4, "indicator R bounded (figures 1 and 2)", 300):
        failures = []
        for plan in FIGURES[1].sweeps + FIGURES[2].sweeps:
            for lam in plan.lams:
                res = run_sweep(parse_function(plan.function), lam, plan.n, minimax_every=1)
                vals = res.column("scaled_R")
                tail = vals[np.isfinite(vals)][-10:]
                var = (tail.max() - tail.min()) / tail.min()
                if len(tail) < 10 or not var < 0.2 or res.flagged:
                    failures.append(f"{plan.function} lambda={lam}: variation {var:.3f}")
        check(failures)


PIECEWISE = [(f, lam) for f in ("f4", "f5", "f6") for lam in (0.5, 1.0, 1.5, 3.0)]


def test_c05_piecewise_exponents(criterion):
    with criterion(5, "piecewise exponents (figure 5)", 180):
        failures = []
        for fid, lam in PIECEWISE:
            if (fid, lam) == ("f5", 0.5):
                continue
            p = projection_exponent(fid, lam)
            want = piecewise_rate_exponent(lam, parse_function(fid).smoothness_m)
            if not abs(p - want) < 0.25:
                failures.append(f"{fid} lambda={lam}: {p:.3f} vs {want}")
        check(failures)


@pytest.mark.xfail(strict=True, reason="f5 at lambda=1/2 decays with slope about -5.37 over n=16..250, "
                                       "steeper than the predicted -5 by more than 0.25")
def test_c05_piecewise_exponent_f5_half(criterion):
    with criterion(5, "piecewise exponents (figure 5)", 180, part="f5 lambda=0.5"):
        p = projection_exponent("f5", 0.5)
        assert abs(p + 5.0) < 0.25, f"slope {p:.3f}"


def test_c06_endpoint_constant_and_slopes(criterion):
    with criterion(6, "endpoint leading constant and figure 6 slopes", 60):
        failures = []
        res = run_sweep(parse_function("endpoint:3/2"), 1.0, [200], minimax=False)
        scaled = res.rows[0].err_proj * 200.0**3
        const = endpoint_error_constant(1.5, 1.0)
        if not abs(scaled / const - 1) < 0.05:
            failures.append(f"n^3 error {scaled:.6g} vs constant {const:.6g}")
        for fid, want in (("endpoint:3/2", -3.0), ("arccos", -1.0)):
            for lam in (0.5, 1.0, 2.0, 3.0):
                p = projection_exponent(fid, lam)
                if not abs(p - want) < 0.15:
                    failures.append(f"{fid} lambda={lam}: {p:.3f}")
        check(failures)


def test_c07_interior_critical_points(criterion):
    with criterion(7, "interior singularity exponents (figure 8)", 120):
        failures = []
        for lam in (1 / 6, 1 / 3, 2 / 3, 1.0, 1.5, 2.0, 2.5, 3.0):
            p = projection_exponent("interior:-0.4:5/2", lam)
            want = -2.5 if lam <= 1 else lam - 3.5
            assert want == interior_rate_exponent(lam, 2.5)
            if not abs(p - want) < 0.25:
                failures.append(f"lambda={lam:.4f}: {p:.3f} vs {want}")
        check(failures)


def _equioscillation_failures(cases):
    failures = []
    for fid, n in cases:
        f = parse_function(fid).fn
        r = remez(f, n)
        count = alternation_count(f, r)
        errs = np.abs(f(r.reference) - r.poly_values)
        spread = np.ptp(errs) / r.max_error
        if count != n + 2:
            failures.append(f"{fid} n={n}: {count} alternations")
        if not spread < 1e-8:
            failures.append(f"{fid} n={n}: spread {spread:.2e}")
        if not max(r.h_history) <= r.max_error:
            failures.append(f"{fid} n={n}: levelled error above the final error")
    return failures


def test_c08_remez_equioscillation(criterion):
    cases = [(f, n) for f in ("f2", "f4", "f6") for n in (5, 10, 20) if (f, n) != ("f4", 5)]
    with criterion(8, "Remez equioscillation", 30):
        check(_equioscillation_failures(cases))


@pytest.mark.xfail(strict=True, reason="for odd n the best approximation of (x)_+^4 is also best of degree n+1, "
                                       "so its error alternates n+3 = 8 times at n = 5")
def test_c08_remez_equioscillation_f4_n5(criterion):
    with criterion(8, "Remez equioscillation", 30, part="f4 n=5"):
        check(_equioscillation_failures([("f4", 5)]))


LEBESGUE_N = [16, 32, 64, 128, 256]


def test_c09_lebesgue_exponents(criterion):
    with criterion(9, "Lebesgue constant growth", 120):
        failures = []
        for lam in (0.5, 1.5):
            vals = [lebesgue_constant(lam, n) for n in LEBESGUE_N]
            p = fit_rate(list(zip(LEBESGUE_N, vals))).exponent
            if not abs(p - lam) < 0.15:
                failures.append(f"lambda={lam}: {p:.3f}")
        check(failures)


@pytest.mark.xfail(strict=True, reason="for lambda < 0 the Lebesgue constant grows like log n "
                                       "(2.30 at n=16, 3.40 at n=256, 3.96 at n=1024)")
def test_c09_lebesgue_bounded_negative_lambda(criterion):
    # bounded: variation below 20% over the final decade of n, as in criterion 4
    with criterion(9, "Lebesgue constant growth", 120, part="lambda=-1/4 bounded"):
        vals = np.array([lebesgue_constant(-0.25, n) for n in LEBESGUE_N if n >= 256 / 10])
        var = (vals.max() - vals.min()) / vals.min()
        assert var < 0.2, f"variation {var:.3f} over n=32..256"


def test_c10_bound_dominance(criterion):
    with criterion(10, "coefficient and error bound dominance", 60):
        failures = []
        for fid in ("pole:1.5", "f3"):
            spec = parse_function(fid)
            ell = _bound_spec(spec)
            scale = float(np.max(np.abs(spec.fn(error_grid(spec.fn)))))
            for lam in (-0.25, 0.5, 1.0, 2.5):
                info = series_with_info(spec.fn, lam, 100)
                coeffs = pole_coefficients(1.5, lam, 100) if fid.startswith("pole") else info.series.coeffs
                if not np.all(np.abs(coeffs) <= coefficient_bound(lam, ell, np.arange(101))):
                    failures.append(f"{fid} lambda={lam}: coefficient bound violated")
                ns = list(range(0, 101))
                for n, rep in zip(ns, partial_sum_errors(spec.fn, info.series, ns)):
                    # below 1e-10 the measured error is rounding noise, which no bound controls
                    if rep.max_error < 1e-10 * scale:
                        continue
                    try:
                        bound = analytic_error_bound(lam, ell, n, slack=1.05)
                    except DomainError:
                        continue
                    if rep.max_error > bound:
                        failures.append(f"{fid} lambda={lam} n={n}: {rep.max_error:.3e} > {bound:.3e}")
        check(failures)


def test_c11_gamma_ratios(criterion):
    with criterion(11, "gamma ratio bounds", 1):
        failures = []
        k = np.arange(1, 2001)
        for g in (-0.5, 0.3, 1.0, 2.7):
            for d in RatioDirection:
                if not np.all(gamma_ratio(k, g, d) <= gamma_ratio_bound(k, g, d) * (1 + 1e-12)):
                    failures.append(f"gamma={g} {d.value}: bound violated")
            steps = np.diff(psi(k, g))
            mono = np.all(steps < 0) if 0 < g < 1 else np.all(steps > 0) if g != 1 else np.allclose(steps, 0)
            if not mono:
                failures.append(f"gamma={g}: psi not monotone")
            if 0 <= g < 1:
                gap = abs(gamma_ratio(1, g) / gamma_ratio_bound(1, g) - 1)
            else:
                gap = abs(gamma_ratio(1e13, g) / gamma_ratio_bound(1e13, g) - 1)
            if not gap < 1e-12:
                failures.append(f"gamma={g}: attainment gap {gap:.2e}")
        check(failures)


def test_c12_asymptotics(criterion):
    with criterion(12, "interior asymptotics and Legendre/Chebyshev ratio", 30):
        failures = []
        s = InteriorSingularity(0.25, 1.5)
        ks = np.arange(32, 513)
        for lam in (0.75, 1.5, -0.3):
            tab = interior_coefficient_table(s, lam, 512)
            asym = interior_asymptotic(s, lam, ks)
            env = np.abs(asym / np.cos(2 * (ks + lam) * s.phi - 0.5 * lam * math.pi))
            slope = fit_rate(list(zip(ks, np.abs(tab[ks] - asym) / env))).exponent
            if not slope <= -0.8:
                failures.append(f"lambda={lam}: deviation slope {slope:.3f}")
        pred = legendre_chebyshev_ratio(s, 200)
        got = (interior_coefficient_table(s, 0.5, 200)[200]
               / interior_coefficient_table(s, Lambda.chebyshev(), 200)[200])
        if pred.excluded or not abs(got / pred.value - 1) < 0.10:
            failures.append(f"ratio {got:.6g} vs prediction {pred.value:.6g}")
        check(failures)


def test_c13_spectral_derivatives(criterion):
    with criterion(13, "spectral derivative bound and rate", 60):
        failures = []
        for j in (1, 2):
            tab = run_spectral_diff(parse_function("f3"), 1.0, j, range(10, 81, 2), slack=1.05)
            ok = np.isfinite(tab.bound)
            if not ok.sum() >= 20 or np.any(tab.err[ok] > tab.bound[ok]):
                failures.append(f"j={j}: bound violated")
            if not abs(tab.fit.geometric_base / bernstein_rho(0.0, 1 / 3) - 1) < 0.02:
                failures.append(f"j={j}: base {tab.fit.geometric_base:.6f}")
        check(failures)
