"""Gauss-Jacobi / Gauss-Gegenbauer rules and composite rules split at singular points.

Nodes come from the eigenvalues of the symmetric Jacobi matrix (Golub-Welsch);
weights are Christoffel numbers 1 / sum_k p_k(x_i)^2 of the orthonormal
polynomials, which keeps tiny endpoint weights accurate to full relative
precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError
from .gegenbauer_core import Lambda, as_lambda

__all__ = [
    "QuadratureRule",
    "PiecewiseFn",
    "gauss_jacobi",
    "gauss_gegenbauer_rule",
    "integrate",
    "composite_nodes",
    "composite_integrate",
]

# geometric grading toward fractional-power singularities
_GRADE_RATIO = 0.15
_GRADE_LEVELS = 24
_GRADE_NODES = 24


def _jacobi_matrix(alpha: float, beta: float, m: int):
    k = np.arange(m, dtype=float)
    ab = alpha + beta
    diag = np.empty(m)
    with np.errstate(invalid="ignore", divide="ignore"):
        diag[:] = (beta**2 - alpha**2) / ((2 * k + ab) * (2 * k + ab + 2))
    diag[0] = (beta - alpha) / (ab + 2.0)
    off = np.empty(max(m - 1, 0))
    if m > 1:
        kk = k[1:]
        with np.errstate(invalid="ignore", divide="ignore"):
            off[:] = np.sqrt(4 * kk * (kk + alpha) * (kk + beta) * (kk + ab)
                             / ((2 * kk + ab) ** 2 * (2 * kk + ab + 1) * (2 * kk + ab - 1)))
        # k = 1 after cancelling (1 + alpha + beta) analytically
        off[0] = math.sqrt(4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab)))
    if alpha == beta:
        diag[:] = 0.0
    return diag, off


def _jacobi_log_mass(alpha: float, beta: float) -> float:
    return ((alpha + beta + 1) * math.log(2.0) + math.lgamma(alpha + 1)
            + math.lgamma(beta + 1) - math.lgamma(alpha + beta + 2))


def _jacobi_mass(alpha: float, beta: float) -> float:
    return math.exp(_jacobi_log_mass(alpha, beta))


def _orthonormal_top(alpha, beta, x, m):
    """p_{m-1}, p_m, p_m' and sum_{k<m} p_k^2 at x, in the dtype of x."""
    ld = x.dtype.type
    ab = ld(alpha) + ld(beta)
    a = ld(alpha)
    b = ld(beta)
    mass = np.exp(ld(_jacobi_log_mass(alpha, beta)))
    p_prev = np.zeros_like(x)
    p = np.full_like(x, 1 / np.sqrt(mass))
    d_prev = np.zeros_like(x)
    d = np.zeros_like(x)
    total = p * p
    b_cur = ld(0)
    for k in range(m):
        kk = ld(k)
        if k == 0:
            diag = (b - a) / (ab + 2)
        elif alpha == beta:
            diag = ld(0)
        else:
            diag = (b * b - a * a) / ((2 * kk + ab) * (2 * kk + ab + 2))
        k1 = kk + 1
        if k == 0:
            b_next = np.sqrt(4 * (1 + a) * (1 + b) / ((2 + ab) ** 2 * (3 + ab)))
        else:
            b_next = np.sqrt(4 * k1 * (k1 + a) * (k1 + b) * (k1 + ab)
                             / ((2 * k1 + ab) ** 2 * (2 * k1 + ab + 1) * (2 * k1 + ab - 1)))
        p_new = ((x - diag) * p - b_cur * p_prev) / b_next
        d_new = (p + (x - diag) * d - b_cur * d_prev) / b_next
        p_prev, p = p, p_new
        d_prev, d = d, d_new
        b_cur = b_next
        if k < m - 1:
            total = total + p * p
    return p_prev, p, d, total


@lru_cache(maxsize=256)
def _gauss_jacobi_cached(alpha: float, beta: float, m: int):
    diag, off = _jacobi_matrix(alpha, beta, m)
    if m == 1:
        x = diag.copy()
    else:
        x = eigh_tridiagonal(diag, off, eigvals_only=True)
    x = np.sort(x)
    if alpha == beta:
        x = 0.5 * (x - x[::-1])
    # Eigenvalues carry a few ulp of error. Near +-1 the Christoffel function
    # varies like 1/(1 - |x|), so weights computed at those nodes lose about
    # eps/(1 - |x|) relative accuracy, which matters when the weight function
    # is singular. Newton-polish in extended precision and form the weights
    # there; on platforms where longdouble is plain double this is a no-op.
    _, _, _, total = _orthonormal_top(alpha, beta, x, m)
    w = 1.0 / total
    edge = np.flatnonzero(1.0 - np.abs(x) < 0.05)
    if edge.size:
        xl = x[edge].astype(np.longdouble)
        for _ in range(2):
            _, p, dp, _ = _orthonormal_top(alpha, beta, xl, m)
            xl = np.clip(xl - p / dp, -1, 1)
        _, _, _, total = _orthonormal_top(alpha, beta, xl, m)
        w[edge] = (1 / total).astype(float)
        x[edge] = xl.astype(float)
    if alpha == beta:
        x = 0.5 * (x - x[::-1])
        w = 0.5 * (w + w[::-1])
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=256)
def _gauss_jacobi_extended(alpha: float, beta: float, m: int):
    x0, _ = _gauss_jacobi_cached(alpha, beta, m)
    x = x0.astype(np.longdouble)
    if m > 1:
        for _ in range(3):
            _, p, dp, _ = _orthonormal_top(alpha, beta, x, m)
            x = np.clip(x - p / dp, -1, 1)
    _, _, _, total = _orthonormal_top(alpha, beta, x, m)
    w = 1 / total
    if alpha == beta:
        x = (x - x[::-1]) / 2
        w = (w + w[::-1]) / 2
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_jacobi(alpha: float, beta: float, m: int, *, extended: bool = False):
    """Nodes and weights of the m-point rule for (1-x)^alpha (1+x)^beta on [-1, 1].

    With ``extended`` every node is Newton-polished and every weight formed in
    np.longdouble, and the arrays are returned in that dtype.
    """
    if alpha <= -1 or beta <= -1:
        raise DomainError("Jacobi exponents must exceed -1")
    if m < 1:
        raise ValueError("need at least one node")
    if extended:
        return _gauss_jacobi_extended(float(alpha), float(beta), int(m))
    return _gauss_jacobi_cached(float(alpha), float(beta), int(m))


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for the weight (1 - x^2)^(lam - 1/2) on [-1, 1]."""

    lam: Lambda
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.nodes)

    def __call__(self, f: Callable) -> float:
        return integrate(self, f)


def gauss_gegenbauer_rule(lam, m: int) -> QuadratureRule:
    """m-point Gauss rule for omega_lam; its nodes are the zeros of C_m^lam."""
    lam = as_lambda(lam)
    if m > 4000:
        raise ValueError("rules above 4000 nodes are not supported")
    e = lam.value - 0.5
    x, w = gauss_jacobi(e, e, m)
    return QuadratureRule(lam, x, w)


def integrate(rule: QuadratureRule, f: Callable) -> float:
    """sum_i w_i f(x_i)."""
    return float(np.dot(rule.weights, f(rule.nodes)))


@dataclass(frozen=True)
class PiecewiseFn:
    """A function on [-1, 1] that is analytic between its breakpoints.

    ``smoothness_m`` is the m of C^(m-1) piecewise analytic functions, or
    ``"analytic"``. ``singular_points`` lists points (breakpoints or +-1) where
    the function has a fractional-power singularity; quadrature panels are
    graded geometrically toward them. ``complex_evaluator`` is optional and
    only used for analytic functions off the real line.
    """

    evaluator: Callable
    breakpoints: tuple = ()
    smoothness_m: object = "analytic"
    singular_points: tuple = ()
    complex_evaluator: Callable | None = None
    name: str = ""

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        if any(not -1.0 < b < 1.0 for b in bp):
            raise DomainError("breakpoints must lie strictly inside (-1, 1)")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise DomainError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bp)
        sp = tuple(sorted(float(s) for s in self.singular_points))
        if any(s not in bp and s not in (-1.0, 1.0) for s in sp):
            raise DomainError("singular points must be breakpoints or endpoints")
        object.__setattr__(self, "singular_points", sp)

    def __call__(self, x):
        x = np.asarray(x)
        if x.dtype != np.longdouble:
            x = x.astype(float)
        return self.evaluator(x)

    @property
    def is_analytic(self) -> bool:
        return self.smoothness_m == "analytic" and not self.breakpoints and not self.singular_points


def _panel_rule(lam: float, a: float, b: float, m: int, touch_left: bool, touch_right: bool,
                extended: bool = False):
    """Nodes/weights on [a, b] with omega_lam folded into the weights."""
    e = lam - 0.5
    if extended:
        a, b = np.longdouble(a), np.longdouble(b)
    half = (b - a) / 2
    mid = (a + b) / 2
    if touch_left and touch_right:
        return gauss_jacobi(e, e, m, extended=extended)
    if touch_left:
        # (1+x)^e is singular at -1 and handled by the rule; (1-x)^e is smooth here
        t, w = gauss_jacobi(0.0, e, m, extended=extended)
        x = mid + half * t
        return x, w * half ** (e + 1.0) * (1 - x) ** e
    if touch_right:
        t, w = gauss_jacobi(e, 0.0, m, extended=extended)
        x = mid + half * t
        return x, w * half ** (e + 1.0) * (1 + x) ** e
    t, w = gauss_jacobi(0.0, 0.0, m, extended=extended)
    x = mid + half * t
    return x, w * half * (1 - x * x) ** e


def _graded_cuts(a: float, b: float, at_left: bool, at_right: bool):
    """Subdivide [a, b] geometrically toward whichever ends are singular."""
    cuts = [a, b]
    length = b - a
    if at_left and at_right:
        m = 0.5 * (a + b)
        return _graded_cuts(a, m, True, False)[:-1] + _graded_cuts(m, b, False, True)
    if at_left:
        cuts = [a] + [a + length * _GRADE_RATIO**j for j in range(_GRADE_LEVELS, 0, -1)] + [b]
    elif at_right:
        cuts = [a] + [b - length * _GRADE_RATIO**j for j in range(1, _GRADE_LEVELS + 1)] + [b]
    return cuts


def composite_nodes(lam, breakpoints: Sequence[float] = (), m_per_panel: int = 64,
                    singular_points: Sequence[float] = (), *, extended: bool = False):
    """Composite nodes ``x`` and weights ``W`` with sum W g(x) ~ int omega_lam g.

    Panels are [-1, xi_1], ..., [xi_l, 1]. A panel next to a singular point is
    split geometrically toward it; the small graded sub-panels use a fixed
    modest node count while the main part of every panel uses ``m_per_panel``.
    ``extended`` builds everything in np.longdouble.
    """
    lam = as_lambda(lam).value
    edges = [-1.0] + [float(b) for b in breakpoints] + [1.0]
    if any(e2 <= e1 for e1, e2 in zip(edges, edges[1:])):
        raise DomainError("breakpoints must be strictly increasing inside (-1, 1)")
    sing = set(float(s) for s in singular_points)
    xs, ws = [], []
    for a, b in zip(edges, edges[1:]):
        cuts = _graded_cuts(a, b, a in sing, b in sing)
        widths = np.diff(cuts)
        big = float(np.max(widths))
        for c0, c1, wdt in zip(cuts, cuts[1:], widths):
            if wdt >= 0.5 * big:
                m = m_per_panel
            else:
                m = min(m_per_panel, max(_GRADE_NODES, int(math.ceil(m_per_panel * wdt / big)) + 8))
            x, w = _panel_rule(lam, c0, c1, m, c0 == -1.0, c1 == 1.0, extended)
            xs.append(x)
            ws.append(w)
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    order = np.argsort(x, kind="stable")
    return x[order], w[order]


def composite_integrate(lam, f: PiecewiseFn, g: Callable, m_per_panel: int = 64) -> float:
    """int_{-1}^{1} omega_lam(x) f(x) g(x) dx, panel by panel."""
    if not isinstance(f, PiecewiseFn):
        f = PiecewiseFn(f)
    x, w = composite_nodes(lam, f.breakpoints, m_per_panel, f.singular_points)
    return math.fsum(w * f(x) * g(x))
