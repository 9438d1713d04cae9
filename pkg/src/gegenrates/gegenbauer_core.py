"""Gegenbauer polynomials C_n^lam: values, norms, Dirichlet kernel, series.

``lam = 0`` is the Chebyshev limit: there the basis is T_n and the norms are
pi (n = 0) and pi/2 (n >= 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeUnderflowError, DomainError
from .special_fn import log_abs_gamma, pochhammer

__all__ = [
    "Lambda",
    "as_lambda",
    "GegenbauerSeries",
    "eval_C",
    "eval_C_row",
    "top_two",
    "endpoint_value",
    "norm_h",
    "weight",
    "dirichlet_kernel",
    "derivative_basis_shift",
    "clenshaw",
]


@dataclass(frozen=True)
class Lambda:
    """Gegenbauer parameter, lam > -1/2.

    ``chebyshev_limit_mode`` selects the lam -> 0 limit (Chebyshev T basis);
    it forces ``value == 0`` and ``value == 0`` is only legal in that mode.
    """

    value: float
    chebyshev_limit_mode: bool = False

    def __post_init__(self):
        v = float(self.value)
        object.__setattr__(self, "value", v)
        if not v > -0.5:
            raise DomainError(f"lambda must exceed -1/2, got {v}")
        if self.chebyshev_limit_mode and v != 0.0:
            raise DomainError("Chebyshev limit mode requires value 0")
        if v == 0.0 and not self.chebyshev_limit_mode:
            raise DomainError("lambda = 0 is only available in Chebyshev limit mode")

    @classmethod
    def chebyshev(cls) -> "Lambda":
        return cls(0.0, True)

    @property
    def is_chebyshev(self) -> bool:
        return self.chebyshev_limit_mode

    def __float__(self):
        return self.value


def as_lambda(lam) -> Lambda:
    """Coerce a float (0 meaning the Chebyshev limit) or a Lambda."""
    if isinstance(lam, Lambda):
        return lam
    lam = float(lam)
    if lam == 0.0:
        return Lambda.chebyshev()
    return Lambda(lam)


def weight(lam, x):
    """omega_lam(x) = (1 - x^2)^(lam - 1/2)."""
    lam = as_lambda(lam).value
    x = np.asarray(x, dtype=float)
    return (1.0 - x * x) ** (lam - 0.5)


def eval_C_row(lam, n_max: int, x):
    """All C_k^lam(x), k = 0..n_max, stacked along axis 0.

    Uses the three-term recurrence
    k C_k = 2 (k + lam - 1) x C_{k-1} - (k + 2 lam - 2) C_{k-2}.
    """
    lam = as_lambda(lam)
    x = np.asarray(x)
    # np.longdouble input keeps its precision, recurrence coefficients included
    real = np.longdouble if x.dtype == np.longdouble else np.float64
    x = x.astype(real, copy=False)
    out = np.empty((n_max + 1,) + x.shape, dtype=real)
    out[0] = 1.0
    if n_max == 0:
        return out
    if lam.is_chebyshev:
        out[1] = x
        for k in range(2, n_max + 1):
            out[k] = 2.0 * x * out[k - 1] - out[k - 2]
        return out
    lv = real(lam.value)
    out[1] = 2 * lv * x
    for k in range(2, n_max + 1):
        out[k] = (2 * (k + lv - 1) * x * out[k - 1] - (k + 2 * lv - 2) * out[k - 2]) / k
    return out


def eval_C(lam, n: int, x):
    """C_n^lam(x) (T_n(x) in the Chebyshev limit)."""
    lam = as_lambda(lam)
    x = np.asarray(x, dtype=float)
    if n == 0:
        val = np.ones_like(x)
    else:
        # same arithmetic as eval_C_row, keeping only two rows
        lv = lam.value
        c0 = np.ones_like(x)
        c1 = x.copy() if lam.is_chebyshev else 2.0 * lv * x
        for k in range(2, n + 1):
            if lam.is_chebyshev:
                c0, c1 = c1, 2.0 * x * c1 - c0
            else:
                c0, c1 = c1, (2.0 * (k + lv - 1.0) * x * c1 - (k + 2.0 * lv - 2.0) * c0) / k
        val = c1
    return float(val) if val.ndim == 0 else val


def top_two(lam, n: int, x):
    """(C_n^lam(x), C_{n+1}^lam(x)) without storing the lower rows."""
    lam = as_lambda(lam)
    x = np.asarray(x, dtype=float)
    lv = lam.value
    c0 = np.ones_like(x)
    c1 = x.copy() if lam.is_chebyshev else 2.0 * lv * x
    for k in range(2, n + 2):
        if lam.is_chebyshev:
            c0, c1 = c1, 2.0 * x * c1 - c0
        else:
            c0, c1 = c1, (2.0 * (k + lv - 1.0) * x * c1 - (k + 2.0 * lv - 2.0) * c0) / k
    return c0, c1


def endpoint_value(lam, n: int) -> float:
    """C_n^lam(1) = Gamma(n + 2 lam) / (Gamma(n + 1) Gamma(2 lam))."""
    lam = as_lambda(lam)
    if lam.is_chebyshev or n == 0:
        return 1.0
    # (2 lam)_n / n! handles lam < 0 where Gamma(2 lam) is negative
    l1, s1 = log_abs_gamma(n + 2.0 * lam.value)
    l2, s2 = log_abs_gamma(2.0 * lam.value)
    return s1 * s2 * math.exp(l1 - l2 - math.lgamma(n + 1.0))


def norm_h(lam, n):
    """h_n^lam = int omega_lam (C_n^lam)^2 dx.

    h = pi 2^(1-2 lam) Gamma(n+2 lam) / (Gamma(lam)^2 Gamma(n+1) (n+lam)).
    Accepts an integer or an integer array for ``n``.
    """
    lam = as_lambda(lam)
    n_arr = np.asarray(n, dtype=float)
    if lam.is_chebyshev:
        out = np.where(n_arr == 0, math.pi, 0.5 * math.pi)
    else:
        lv = lam.value
        lg, sg = log_abs_gamma(n_arr + 2.0 * lv)
        lgl, _ = log_abs_gamma(lv)
        logh = (math.log(math.pi) + (1.0 - 2.0 * lv) * math.log(2.0) + lg - 2.0 * lgl
                - np.vectorize(math.lgamma)(n_arr + 1.0) - np.log(np.abs(n_arr + lv)))
        out = sg * np.sign(n_arr + lv) * np.exp(logh)
    return float(out) if np.ndim(n) == 0 else out


def _cd_constant(lam: Lambda, n: int) -> float:
    if lam.is_chebyshev:
        return 1.0 / math.pi
    lv = lam.value
    lgl, _ = log_abs_gamma(lv)
    lgn, sgn = log_abs_gamma(n + 2.0 * lv)
    return sgn * math.exp(2.0 * lgl - (2.0 - 2.0 * lv) * math.log(2.0) - math.log(math.pi)
                          + math.lgamma(n + 2.0) - lgn)


def dirichlet_kernel(lam, n: int, x, t):
    """D_n^lam(x, t) = sum_{k<=n} C_k(x) C_k(t) / h_k.

    The Christoffel-Darboux quotient is used when |x - t| > 1e-6 (n + 1);
    closer pairs fall back on the direct sum.
    """
    lam = as_lambda(lam)
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    scalar = x.ndim == 0
    x = np.atleast_1d(x).astype(float)
    t = np.atleast_1d(t).astype(float)
    delta = 1e-6 * (n + 1)
    near = np.abs(x - t) <= delta
    out = np.empty(x.shape)
    far = ~near
    if np.any(far):
        xf, tf = x[far], t[far]
        cx, cx1 = top_two(lam, n, xf)
        ct, ct1 = top_two(lam, n, tf)
        num = cx1 * ct - ct1 * cx
        out[far] = _cd_constant(lam, n) * num / (xf - tf)
    if np.any(near):
        h = norm_h(lam, np.arange(n + 1))
        rx = eval_C_row(lam, n, x[near])
        rt = eval_C_row(lam, n, t[near])
        out[near] = np.tensordot(1.0 / h, rx * rt, axes=(0, 0))
    return float(out[0]) if scalar else out


def clenshaw(lam, coeffs, x):
    """Evaluate sum_k coeffs[k] C_k^lam(x) by Clenshaw's backward recurrence."""
    lam = as_lambda(lam)
    a = np.asarray(coeffs, dtype=float)
    x = np.asarray(x, dtype=float)
    n = len(a) - 1
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    if lam.is_chebyshev:
        for k in range(n, 0, -1):
            b1, b2 = a[k] + 2.0 * x * b1 - b2, b1
        out = a[0] + x * b1 - b2
    else:
        lv = lam.value
        # C_{k+1} = alpha_k C_k - beta_k C_{k-1}
        for k in range(n, -1, -1):
            alpha = 2.0 * (k + lv) * x / (k + 1.0)
            beta = (k + 2.0 * lv) / (k + 2.0)
            b1, b2 = a[k] + alpha * b1 - beta * b2, b1
        out = b1
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class GegenbauerSeries:
    """Finite Gegenbauer expansion sum_{k=0}^n a_k C_k^lam(x)."""

    lam: Lambda
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "lam", as_lambda(self.lam))
        c = np.array(self.coeffs, dtype=float, ndmin=1)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return clenshaw(self.lam, self.coeffs, x)

    def derivative(self, j: int = 1, *, strict: bool = True) -> "GegenbauerSeries":
        return derivative_basis_shift(self, j, strict=strict)

    def truncate(self, n: int) -> "GegenbauerSeries":
        return GegenbauerSeries(self.lam, self.coeffs[: n + 1])


def derivative_basis_shift(series: GegenbauerSeries, j: int, *, strict: bool = True) -> GegenbauerSeries:
    """j-th derivative as a series in C^(lam+j).

    Uses d^j/dx^j C_n^lam = 2^j (lam)_j C_{n-j}^(lam+j). With ``strict=False``
    a request with j > degree returns the zero series instead of raising.
    """
    if j < 1:
        raise ValueError("derivative order must be >= 1")
    lam = series.lam
    if lam.is_chebyshev:
        raise DomainError("basis-shift differentiation needs lam != 0")
    new_lam = Lambda(lam.value + j)
    if j > series.degree:
        if strict:
            raise DegreeUnderflowError(f"cannot take derivative {j} of a degree-{series.degree} series")
        return GegenbauerSeries(new_lam, [0.0])
    factor = 2.0**j * pochhammer(lam.value, j)
    return GegenbauerSeries(new_lam, factor * series.coeffs[j:])
