"""Best uniform polynomial approximation B_n(f) by the barycentric Remez algorithm.

The trial polynomial is never expanded in a basis. At every step it is the
barycentric interpolant through the n + 2 reference points with values
f(x_k) - (-1)^k h, where the levelled error h has the closed form
h = sum w_k f_k / sum (-1)^k w_k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import RemezError
from .projection import chebyshev_grid
from .quadrature import PiecewiseFn

__all__ = ["MinimaxResult", "remez", "eval_minimax", "alternation_count", "barycentric_weights"]

_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)
_NOISE = 1e3 * np.finfo(float).eps


@dataclass(frozen=True)
class MinimaxResult:
    """Outcome of a Remez run.

    ``poly_values`` are the values of B_n at ``reference``; ``levelled_error``
    is the signed h with f - B_n = (-1)^k h at reference point k.
    ``h_history`` keeps |h| of every iterate: each is a lower bound for the
    true minimax error (de la Vallee Poussin).
    """

    degree: int
    reference: np.ndarray = field(repr=False)
    poly_values: np.ndarray = field(repr=False)
    levelled_error: float
    max_error: float
    iterations: int = 0
    converged: bool = True
    h_history: tuple = field(default=(), repr=False)
    weights: np.ndarray = field(default=None, repr=False)

    @property
    def defect(self) -> float:
        """(max|e| - |h|) / max|e|, zero for an exactly levelled error."""
        if self.max_error == 0.0:
            return 0.0
        return (self.max_error - abs(self.levelled_error)) / self.max_error

    def __call__(self, x):
        return eval_minimax(self, x)


def barycentric_weights(x: np.ndarray) -> np.ndarray:
    """Weights 1/prod_{j != k}(x_k - x_j), scaled so the largest has modulus 1."""
    m = len(x)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    logw = -np.sum(np.log(np.abs(diff)), axis=1)
    sign = np.where((m - 1 - np.arange(m)) % 2 == 0, 1.0, -1.0)
    return sign * np.exp(logw - np.max(logw))


def _bary_eval(ref, w, vals, x):
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel()
    d = flat[:, None] - ref[None, :]
    hit = d == 0.0
    d[hit] = 1.0
    c = w[None, :] / d
    out = (c @ vals) / np.sum(c, axis=1)
    rows, cols = np.nonzero(hit)
    out[rows] = vals[cols]
    return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)


def eval_minimax(result: MinimaxResult, x):
    """Second-form barycentric evaluation of B_n."""
    w = result.weights if result.weights is not None else barycentric_weights(result.reference)
    return _bary_eval(result.reference, w, result.poly_values, x)


def _search_grid(f: PiecewiseFn, n: int, size: int | None):
    size = size or max(4001, 40 * (n + 2))
    x = chebyshev_grid(size)
    if f.breakpoints:
        x = np.union1d(x, np.asarray(f.breakpoints))
    return x


def _golden_max(g, a, b, tol=1e-12):
    """Vectorized golden-section maximization of g on the brackets [a, b].

    Both interior points are re-evaluated every step; g is cheap here and this
    keeps the bookkeeping trivial.
    """
    a = a.copy()
    b = b.copy()
    while np.max(b - a, initial=0.0) > tol:
        c = b - _GOLDEN * (b - a)
        d = a + _GOLDEN * (b - a)
        left = g(c) > g(d)
        b = np.where(left, d, b)
        a = np.where(left, a, c)
    mid = 0.5 * (a + b)
    return mid, g(mid)


def _extrema(err_fn, grid):
    """One refined extremum of |e| per sign run of e on ``grid``.

    Returns (points, signed errors). Each grid maximum is refined by golden
    section on both neighbouring grid cells separately, so a peak next to a
    breakpoint (where e has a kink) is found without crossing the kink.
    """
    e = err_fn(grid)
    s = np.sign(e)
    s[s == 0] = 1.0
    cuts = np.flatnonzero(s[1:] != s[:-1]) + 1
    starts = np.concatenate(([0], cuts))
    ends = np.concatenate((cuts, [len(grid)]))
    idx = np.array([st + int(np.argmax(np.abs(e[st:en]))) for st, en in zip(starts, ends)])
    pts = grid[idx].copy()
    vals = e[idx].copy()
    sg = np.sign(vals)
    for lo_i, hi_i in ((np.maximum(idx - 1, 0), idx), (idx, np.minimum(idx + 1, len(grid) - 1))):
        xr, _ = _golden_max(lambda t: sg * err_fn(t), grid[lo_i], grid[hi_i])
        er = err_fn(xr)
        better = (np.abs(er) > np.abs(vals)) & (np.sign(er) == sg)
        pts[better] = xr[better]
        vals[better] = er[better]
    return pts, vals


def _trim(pts, vals, keep):
    """Drop points until ``keep`` alternating extrema remain."""
    pts = list(pts)
    vals = list(vals)
    while len(pts) > keep:
        a = np.abs(vals)
        end = 0 if a[0] <= a[-1] else len(pts) - 1
        if len(pts) - keep >= 2 and len(pts) > 2:
            pair_cost = np.maximum(a[:-1], a[1:])
            i = int(np.argmin(pair_cost))
            if pair_cost[i] < a[end]:
                del pts[i : i + 2]
                del vals[i : i + 2]
                continue
        del pts[end]
        del vals[end]
    return np.array(pts), np.array(vals)


def _level(ref, fref):
    w = barycentric_weights(ref)
    alt = np.where(np.arange(len(ref)) % 2 == 0, 1.0, -1.0)
    h = float(np.dot(w, fref) / np.dot(w, alt))
    return w, h, fref - alt * h


def _initial_reference(n: int, warped: bool):
    """Chebyshev points of the second kind; ``warped`` shifts them asymmetrically."""
    t = np.pi * np.arange(n + 2) / (n + 1)
    if warped:
        t = t + 0.1 * np.sin(t)
    ref = -np.cos(t)
    ref[0], ref[-1] = -1.0, 1.0
    return ref


def remez(f, n: int, *, max_iter: int = 100, tol: float = 1e-8, grid: int | None = None) -> MinimaxResult:
    """Degree-n minimax approximation of ``f`` on [-1, 1].

    Multi-point exchange: every iteration replaces the whole reference by the
    n + 2 alternating extrema of the current error. Stops when the relative
    gap between max|e| and |h| drops below ``tol``, or when the reference
    moves by less than 1e-12. A gap under the rounding floor (about 2e-13
    times max|f|, relevant once the error itself is near 1e-8) is accepted as
    soon as further exchanges stop shrinking it. Raises RemezError (with the last iterate attached) on
    non-convergence or when two reference points merge.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    if n > 200:
        raise ValueError("remez supports n <= 200")
    f = f if isinstance(f, PiecewiseFn) else PiecewiseFn(f)
    xs = _search_grid(f, n, grid)
    fx = f(xs)
    scale = max(float(np.max(np.abs(fx))), 1e-300)
    ref = _initial_reference(n, warped=False)
    restarted = False
    history = []
    gaps = []
    result = None
    for it in range(1, max_iter + 1):
        fref = f(ref)
        w, h, pvals = _level(ref, fref)
        history.append(abs(h))

        def err_fn(t, ref=ref, w=w, pvals=pvals):
            return f(t) - _bary_eval(ref, w, pvals, t)

        e_grid = fx - _bary_eval(ref, w, pvals, xs)
        emax_grid = float(np.max(np.abs(e_grid)))
        if emax_grid < 1e-13 * scale:
            # f is (numerically) a polynomial of degree <= n
            return MinimaxResult(n, ref, pvals, h, emax_grid, it, True, tuple(history), w)
        pts, vals = _extrema(err_fn, xs)
        emax = max(float(np.max(np.abs(vals))), emax_grid)
        result = MinimaxResult(n, ref, pvals, h, emax, it, False, tuple(history), w)
        gap = emax - abs(h)
        gaps.append(gap)
        if gap < tol * emax:
            return _finish(result)
        # below ~1e3 eps * scale the gap is rounding noise; accept it once the
        # exchange stops making progress
        if gap < _NOISE * scale and len(gaps) > 3 and gap > 0.5 * min(gaps[-4:-1]):
            return _finish(result)
        if len(pts) < n + 2:
            if restarted:
                raise RemezError(f"only {len(pts)} alternating extrema found for degree {n}", result)
            # a symmetric reference can level an even f with h = 0 exactly;
            # start once more from a reference with the symmetry broken
            restarted = True
            ref = _initial_reference(n, warped=True)
            gaps.clear()
            continue
        new_ref, _ = _trim(pts, vals, n + 2)
        if np.min(np.diff(new_ref)) < 1e-13:
            raise RemezError("reference points merged", result)
        moved = float(np.max(np.abs(new_ref - ref)))
        ref = new_ref
        if moved < 1e-12:
            return _finish(result)
    raise RemezError(f"no convergence after {max_iter} exchanges (defect {result.defect:.3e})", result)


def _finish(r: MinimaxResult) -> MinimaxResult:
    return MinimaxResult(r.degree, r.reference, r.poly_values, r.levelled_error, r.max_error,
                         r.iterations, True, r.h_history, r.weights)


def alternation_count(f, result: MinimaxResult, *, grid: int = 10001, rel_tol: float = 1e-6) -> int:
    """Length of the longest alternating sequence of near-extremal errors.

    Sign runs of f - B_n are scanned on a Chebyshev grid (breakpoints added);
    a run counts when its refined extremum reaches (1 - rel_tol) max_error.
    """
    f = f if isinstance(f, PiecewiseFn) else PiecewiseFn(f)
    xs = _search_grid(f, result.degree, grid)
    pts, vals = _extrema(lambda t: f(t) - eval_minimax(result, t), xs)
    top = np.max(np.abs(vals))
    keep = vals[np.abs(vals) >= (1.0 - rel_tol) * top]
    if keep.size == 0:
        return 0
    signs = np.sign(keep)
    return int(1 + np.count_nonzero(signs[1:] != signs[:-1]))
