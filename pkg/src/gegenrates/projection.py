"""Gegenbauer projections S_n^lam(f): coefficients, errors, Lebesgue constants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import QuadratureAccuracyError
from .gegenbauer_core import (
    GegenbauerSeries,
    _cd_constant,
    as_lambda,
    clenshaw,
    derivative_basis_shift,
    dirichlet_kernel,
    eval_C_row,
    norm_h,
    top_two,
)
from .quadrature import PiecewiseFn, composite_nodes, gauss_jacobi

__all__ = [
    "ErrorReport",
    "SeriesInfo",
    "compute_series",
    "series_with_info",
    "quadrature_size",
    "eval_series",
    "chebyshev_grid",
    "error_grid",
    "max_error",
    "partial_sum_errors",
    "indicator_R",
    "lebesgue_function",
    "lebesgue_constant",
    "differentiate_projection",
]

DEFAULT_GRID = 10001


@dataclass(frozen=True)
class ErrorReport:
    n: int
    max_error: float
    argmax_x: float
    grid_size: int


def _as_piecewise(f) -> PiecewiseFn:
    return f if isinstance(f, PiecewiseFn) else PiecewiseFn(f)


def quadrature_size(f, lam, n: int, level: int = 0) -> int:
    """Node count used at doubling ``level``: total nodes for an analytic f,
    nodes per panel otherwise."""
    f = _as_piecewise(f)
    if f.is_analytic:
        return max(2 * n + 16, 128) * 2**level
    return max(n // 2 + 32, 64) * 2**level


def _nodes(f: PiecewiseFn, lam, m: int, extended: bool):
    if f.is_analytic:
        return gauss_jacobi(lam.value - 0.5, lam.value - 0.5, m, extended=extended)
    return composite_nodes(lam, f.breakpoints, m, f.singular_points, extended=extended)


def _coefficients_with(f: PiecewiseFn, lam, n: int, m: int, extended: bool = False):
    x, w = _nodes(f, lam, m, extended)
    fw = w * f(x)
    rows = eval_C_row(lam, n, x)
    return (rows @ fw).astype(float) / norm_h(lam, np.arange(n + 1))


@dataclass(frozen=True)
class SeriesInfo:
    """A computed projection together with the quadrature that produced it."""

    series: GegenbauerSeries
    quad_size: int
    settled: bool


def series_with_info(f, lam, n: int, *, tol: float = 1e-11, max_doublings: int = 6,
                     quad: int | None = None, extended: bool = False) -> SeriesInfo:
    """Like :func:`compute_series`, but never raises on a failed settle check.

    With ``quad`` given, a single rule of that size is used and ``settled`` is
    True by fiat. Otherwise ``settled`` reports whether two successive
    doublings agreed.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    f = _as_piecewise(f)
    lam = as_lambda(lam)
    if quad is not None:
        return SeriesInfo(GegenbauerSeries(lam, _coefficients_with(f, lam, n, int(quad), extended)), int(quad), True)
    # compare in the orthonormal scaling a_k sqrt(h_k); for lam < 0 the norms
    # shrink like k^(2 lam - 2) and raw coefficients amplify rounding noise
    root_h = np.sqrt(norm_h(lam, np.arange(n + 1)))
    prev = _coefficients_with(f, lam, n, quadrature_size(f, lam, n, 0), extended)
    for level in range(1, max_doublings + 1):
        m = quadrature_size(f, lam, n, level)
        cur = _coefficients_with(f, lam, n, m, extended)
        scale = max(np.max(np.abs(cur * root_h)), 1e-300)
        if np.max(np.abs(cur - prev) * root_h) <= tol * scale:
            return SeriesInfo(GegenbauerSeries(lam, cur), m, True)
        prev = cur
    return SeriesInfo(GegenbauerSeries(lam, cur), m, False)


def compute_series(f, lam, n: int, *, tol: float = 1e-11, max_doublings: int = 6,
                   quad: int | None = None, extended: bool = False) -> GegenbauerSeries:
    """Projection coefficients a_0..a_n of ``f`` in the C^lam basis.

    Quadrature sizes are doubled until two successive coefficient sets agree to
    ``tol``, measured on the orthonormal coefficients a_k sqrt(h_k) relative to
    the largest of them. Raises QuadratureAccuracyError if they never do.
    ``quad`` fixes the rule size instead (total nodes for analytic f, nodes
    per panel for piecewise f).

    ``extended`` runs nodes, weights, f and the C_k^lam recurrence in
    np.longdouble. Small coefficients of a non-smooth f come from heavy
    cancellation in the quadrature sum, so in double they carry an absolute
    error near eps max|f|; the extended path lowers that floor by about the
    ratio of the two machine epsilons (where longdouble is wider than double).
    """
    info = series_with_info(f, lam, n, tol=tol, max_doublings=max_doublings, quad=quad,
                            extended=extended)
    if not info.settled:
        raise QuadratureAccuracyError(
            f"coefficients did not settle after {max_doublings} doublings", latest=info.series.coeffs)
    return info.series


def eval_series(series: GegenbauerSeries, x):
    return clenshaw(series.lam, series.coeffs, x)


def chebyshev_grid(size: int):
    """``size`` Chebyshev extreme points on [-1, 1], ascending, including +-1."""
    if size < 2:
        raise ValueError("grid needs at least two points")
    x = np.sin(0.5 * np.pi * np.arange(-(size - 1), size, 2) / (size - 1))
    x[0], x[-1] = -1.0, 1.0
    return x


def error_grid(f, size: int = DEFAULT_GRID):
    """Chebyshev grid plus the breakpoints of ``f``."""
    f = _as_piecewise(f)
    x = chebyshev_grid(size)
    if f.breakpoints:
        x = np.union1d(x, np.asarray(f.breakpoints))
    return x


def max_error(f, series: GegenbauerSeries, grid: int = DEFAULT_GRID) -> ErrorReport:
    """Largest |f - S| over a Chebyshev grid with +-1 and the breakpoints of f."""
    f = _as_piecewise(f)
    x = error_grid(f, grid)
    err = np.abs(f(x) - eval_series(series, x))
    i = int(np.argmax(err))
    return ErrorReport(series.degree, float(err[i]), float(x[i]), len(x))


def partial_sum_errors(f, series: GegenbauerSeries, n_list, grid: int = DEFAULT_GRID):
    """Max errors of the truncations S_n, n in ``n_list``, in one upward pass.

    Returns an array of ErrorReport in the order of ``n_list``.
    """
    f = _as_piecewise(f)
    lam = series.lam
    wanted = sorted(set(int(n) for n in n_list))
    if wanted and wanted[-1] > series.degree:
        raise ValueError("requested truncation exceeds the series degree")
    x = error_grid(f, grid)
    fx = f(x)
    a = series.coeffs
    reports = {}
    partial = np.full_like(x, a[0])
    c_prev, c_cur = np.ones_like(x), None
    lv = lam.value
    for k in range(0, wanted[-1] + 1 if wanted else 0):
        if k == 1:
            c_cur = x.copy() if lam.is_chebyshev else 2.0 * lv * x
            partial = partial + a[1] * c_cur
        elif k >= 2:
            if lam.is_chebyshev:
                c_new = 2.0 * x * c_cur - c_prev
            else:
                c_new = (2.0 * (k + lv - 1.0) * x * c_cur - (k + 2.0 * lv - 2.0) * c_prev) / k
            c_prev, c_cur = c_cur, c_new
            partial = partial + a[k] * c_cur
        if k in wanted:
            err = np.abs(fx - partial)
            i = int(np.argmax(err))
            reports[k] = ErrorReport(k, float(err[i]), float(x[i]), len(x))
    return [reports[int(n)] for n in n_list]


def indicator_R(f, lam, n: int, *, grid: int = DEFAULT_GRID, minimax=None) -> float:
    """R^lam(n) = ||f - S_n f|| / ||f - B_n f||.

    Returns ``nan`` when both errors sit at rounding level, the 0/0 case of a
    polynomial f with degree <= n. ``minimax`` may supply a precomputed
    MinimaxResult for f and n.
    """
    from .minimax import remez

    f = _as_piecewise(f)
    series = compute_series(f, lam, n)
    e_proj = max_error(f, series, grid).max_error
    if minimax is None:
        minimax = remez(f, n)
    e_best = minimax.max_error
    x = error_grid(f, grid)
    scale = max(float(np.max(np.abs(f(x)))), 1.0)
    if e_proj < 1e-13 * scale and e_best < 1e-13 * scale:
        return math.nan
    return e_proj / e_best


def _kernel_values(lam, n, x, t, cd):
    # D_n(x, t) by Christoffel-Darboux for arrays with x != t
    cx, cx1 = top_two(lam, n, x)
    ct, ct1 = top_two(lam, n, t)
    return cd * (cx1 * ct - ct1 * cx) / (x - t)


def lebesgue_function(lam, n: int, x, m: int | None = None, q: int = 20):
    """int omega_lam(t) |D_n^lam(x, t)| dt for each x in ``x``.

    Sign changes of D_n(x, .) are bracketed on an m-point Gauss grid, refined by
    bisection to 1e-12, and |D_n| is integrated panel by panel with q-point
    rules (Jacobi rules on the two end panels).
    """
    lam = as_lambda(lam)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if n == 0:
        return np.ones_like(x)
    m = m or max(4 * n + 32, 128)
    e = lam.value - 0.5
    tg, _ = gauss_jacobi(e, e, m)
    xs = x[:, None]
    vals = dirichlet_kernel(lam, n, np.broadcast_to(xs, (len(x), m)).ravel(),
                            np.broadcast_to(tg, (len(x), m)).ravel()).reshape(len(x), m)
    cd = _cd_constant(lam, n)
    out = np.empty(len(x))
    flips = np.sign(vals[:, :-1]) * np.sign(vals[:, 1:]) < 0
    rows, cols = np.nonzero(flips)
    lo = tg[cols].copy()
    hi = tg[cols + 1].copy()
    xr = x[rows]
    f_lo = vals[rows, cols]
    while lo.size and np.max(hi - lo) > 1e-12:
        mid = 0.5 * (lo + hi)
        fm = _kernel_values(lam, n, xr, mid, cd)
        left = np.sign(fm) == np.sign(f_lo)
        lo = np.where(left, mid, lo)
        f_lo = np.where(left, fm, f_lo)
        hi = np.where(left, hi, mid)
    roots = 0.5 * (lo + hi)
    tl, wl = gauss_jacobi(0.0, 0.0, q)
    tj_l, wj_l = gauss_jacobi(0.0, e, q)
    tj_r, wj_r = gauss_jacobi(e, 0.0, q)
    for i in range(len(x)):
        cuts = np.concatenate(([-1.0], np.sort(roots[rows == i]), [1.0]))
        a, b = cuts[:-1], cuts[1:]
        half, mid = 0.5 * (b - a), 0.5 * (a + b)
        # interior panels: Legendre nodes, omega folded into the weights
        t_in = mid[1:-1, None] + half[1:-1, None] * tl[None, :]
        w_in = half[1:-1, None] * wl[None, :] * (1.0 - t_in**2) ** e
        t0 = mid[0] + half[0] * tj_l
        w0 = wj_l * half[0] ** (e + 1.0) * (1.0 - t0) ** e
        t1 = mid[-1] + half[-1] * tj_r
        w1 = wj_r * half[-1] ** (e + 1.0) * (1.0 + t1) ** e
        if len(cuts) == 2:
            t_all, w_all = gauss_jacobi(e, e, max(q, n + 2))
        else:
            t_all = np.concatenate((t0, t_in.ravel(), t1))
            w_all = np.concatenate((w0, w_in.ravel(), w1))
        d = dirichlet_kernel(lam, n, np.full_like(t_all, x[i]), t_all)
        out[i] = float(np.dot(w_all, np.abs(d)))
    return out


def lebesgue_constant(lam, n: int, x_grid: int = 33, m: int | None = None) -> float:
    """max over an x-grid of the Lebesgue function (grid symmetric, clustered at +-1)."""
    j = np.arange(x_grid)
    x = np.cos(0.5 * np.pi * j / max(x_grid - 1, 1))
    return float(np.max(lebesgue_function(lam, n, x, m)))


def differentiate_projection(series: GegenbauerSeries, j: int, x):
    """j-th derivative of the series at x."""
    return derivative_basis_shift(series, j)(x)
