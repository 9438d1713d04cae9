"""Explicit bounds and predicted rates for Gegenbauer coefficients and projections.

Everything here is a formula evaluator: given a Bernstein ellipse (rho, the
maximum modulus M of f on it, and its circumference L) it returns coefficient
bounds, projection error bounds, spectral-derivative bounds, and the algebraic
exponents predicted for piecewise analytic functions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import ellipe

from .errors import DomainError
from .gegenbauer_core import as_lambda, eval_C_row
from .special_fn import gamma, log_gamma_ratio, upper_incomplete_gamma

__all__ = [
    "EllipseSpec",
    "RateFit",
    "RatioDirection",
    "gamma_ratio_bound",
    "gamma_ratio",
    "psi",
    "ellipse_spec",
    "ellipse_circumference",
    "ellipse_max_modulus",
    "bernstein_rho",
    "D_factor",
    "coefficient_bound",
    "analytic_error_bound",
    "analytic_error_bound_incomplete",
    "derivative_error_bound",
    "negative_lambda_constant",
    "piecewise_rate_exponent",
    "interior_rate_exponent",
    "critical_point_exponents",
    "kernel_scaling_exponent",
    "fit_rate",
]


class RatioDirection(str, Enum):
    RATIO1 = "ratio1"  # Gamma(k+1)/Gamma(k+gamma)
    RATIO2 = "ratio2"  # Gamma(k+gamma)/Gamma(k+1)


@dataclass(frozen=True)
class EllipseSpec:
    """Bernstein ellipse E_rho with the data the bounds need.

    ``M`` is max |f| on E_rho and ``L`` its circumference.
    """

    rho: float
    M: float
    L: float

    def __post_init__(self):
        if not self.rho > 1.0:
            raise DomainError("rho must exceed 1")
        if self.M < 0 or not self.L > 0:
            raise DomainError("M must be >= 0 and L > 0")

    @property
    def semi_axes(self):
        r = self.rho
        return 0.5 * (r + 1.0 / r), 0.5 * (r - 1.0 / r)


@dataclass(frozen=True)
class RateFit:
    """Least-squares decay fit.

    ``exponent`` is p in e ~ C n^p (for the geometric model, e ~ C n^p b^-n and
    ``geometric_base`` is b). ``residual`` is the RMS deviation in log e.
    """

    exponent: float
    geometric_base: float | None
    residual: float
    n_range: tuple
    log_constant: float = 0.0


def gamma_ratio(k, g, direction=RatioDirection.RATIO1):
    """Gamma(k+1)/Gamma(k+g) (ratio1) or its reciprocal (ratio2), vectorized in k."""
    k = np.asarray(k, dtype=float)
    lr = log_gamma_ratio(k, 1.0, g)
    if RatioDirection(direction) is RatioDirection.RATIO2:
        lr = -lr
    return np.exp(lr)


def gamma_ratio_bound(k, g: float, direction=RatioDirection.RATIO1):
    """Sharp upper bound k^(1-g) c_g for Gamma(k+1)/Gamma(k+g), or k^(g-1) c'_g for the reciprocal.

    For 0 <= g < 1 the constants are 1/Gamma(1+g) (ratio1) and 1 (ratio2);
    otherwise 1 and Gamma(1+g).
    """
    if not g > -1.0:
        raise DomainError("gamma parameter must exceed -1")
    k = np.asarray(k, dtype=float)
    if np.any(k < 1):
        raise DomainError("k must be >= 1")
    inside = 0.0 <= g < 1.0
    if RatioDirection(direction) is RatioDirection.RATIO1:
        const = 1.0 / math.gamma(1.0 + g) if inside else 1.0
        out = const * k ** (1.0 - g)
    else:
        const = 1.0 if inside else math.gamma(1.0 + g)
        out = const * k ** (g - 1.0)
    return float(out) if out.ndim == 0 else out


def psi(k, g: float):
    """psi(k) = Gamma(k+1)/Gamma(k+g) k^(g-1); tends to 1 as k grows."""
    k = np.asarray(k, dtype=float)
    return gamma_ratio(k, g) * k ** (g - 1.0)


def ellipse_circumference(rho: float) -> float:
    """Perimeter of E_rho from the complete elliptic integral of the second kind."""
    a = 0.5 * (rho + 1.0 / rho)
    b = 0.5 * (rho - 1.0 / rho)
    return 4.0 * a * float(ellipe(1.0 - (b / a) ** 2))


def ellipse_max_modulus(f_complex: Callable, rho: float, samples: int = 4096) -> float:
    """max |f| over ``samples`` points of E_rho, z = (u + 1/u)/2, |u| = rho."""
    u = rho * np.exp(2j * np.pi * np.arange(samples) / samples)
    z = 0.5 * (u + 1.0 / u)
    return float(np.max(np.abs(f_complex(z))))


def ellipse_spec(rho: float, f_max: float) -> EllipseSpec:
    if not rho > 1.0:
        raise DomainError("rho must exceed 1")
    return EllipseSpec(float(rho), float(f_max), ellipse_circumference(rho))


def bernstein_rho(singularity_real: float, singularity_imag: float = 0.0) -> float:
    """Parameter of the largest Bernstein ellipse that avoids z0."""
    if singularity_imag == 0.0 and -1.0 <= singularity_real <= 1.0:
        raise DomainError("the singularity lies on [-1, 1]")
    z = complex(singularity_real, singularity_imag)
    s = cmath.sqrt(z * z - 1.0)
    return max(abs(z + s), abs(z - s))


def D_factor(lam, spec: EllipseSpec) -> float:
    """D_lambda(rho) of the coefficient bound (three cases in lambda)."""
    lam = as_lambda(lam)
    if lam.is_chebyshev:
        raise DomainError("D_lambda is defined for lambda != 0")
    lv, r = lam.value, spec.rho
    base = spec.M * spec.L / (math.pi * r)
    q = 1.0 / (r * r)
    if lv < 0:
        factor = (abs(float(gamma(lv))) * math.gamma(1.0 + lv) * math.gamma(1.0 - 2.0 * lv)
                  / math.gamma(1.0 - lv) * (1.0 - q) ** (2.0 * lv - 1.0))
    elif lv <= 1.0:
        factor = (1.0 - q) ** (lv - 1.0) / lv
    else:
        factor = math.gamma(lv) * (1.0 + q) ** (lv - 1.0)
    return base * factor


def coefficient_bound(lam, spec: EllipseSpec, k):
    """Upper bound on |a_k|: the k = 0 constant, else D k^(1-lam) / rho^k."""
    lam = as_lambda(lam)
    lv = lam.value
    d = D_factor(lam, spec)
    k = np.asarray(k, dtype=float)
    if lv < 0:
        a0 = d / abs(float(gamma(lv)))
    elif lv <= 1.0:
        a0 = d * lv
    else:
        a0 = d / math.gamma(lv)
    with np.errstate(divide="ignore"):
        out = np.where(k == 0, a0, d * k ** (1.0 - lv) * spec.rho ** (-k))
    return float(out) if out.ndim == 0 else out


def _error_bound_factor(lv: float) -> float:
    return 1.0 / math.gamma(2.0 * lv) if lv <= 0.5 else 2.0 * lv


def _check_n(lv: float, rho: float, n: int, power: float | None = None):
    p = lv if power is None else power
    # at n = 0 the factor n^p makes the simplified bound vanish, so start at 1
    n_min = max(1, math.floor(p / math.log(rho)))
    if n < n_min:
        raise DomainError(f"the bound needs n >= {n_min}")


def analytic_error_bound(lam, spec: EllipseSpec, n: int, *, slack: float = 1.05) -> float:
    """Projection error bound for f analytic inside E_rho.

    lam > 0: K n^lam / rho^n with K = slack D / ln(rho) times 1/Gamma(2 lam)
    (lam <= 1/2) or 2 lam (lam > 1/2); requires n >= max(1, floor(lam / ln rho)).
    lam < 0: D C_lam / ((rho - 1) rho^n) with C_lam from
    :func:`negative_lambda_constant`.
    """
    lam = as_lambda(lam)
    lv, r = lam.value, spec.rho
    if lam.is_chebyshev:
        raise DomainError("bound is stated for lambda != 0")
    d = D_factor(lam, spec)
    if lv < 0:
        return d * negative_lambda_constant(lv) / ((r - 1.0) * r**n)
    _check_n(lv, r, n)
    return slack * d / math.log(r) * _error_bound_factor(lv) * n**lv * r ** (-float(n))


def analytic_error_bound_incomplete(lam, spec: EllipseSpec, n: int) -> float:
    """Same bound before simplifying the tail integral:
    D factor Gamma(lam + 1, n ln rho) / (ln rho)^(1 + lam)."""
    lam = as_lambda(lam)
    lv, r = lam.value, spec.rho
    if not lv > 0:
        raise DomainError("the incomplete-gamma form is for lambda > 0")
    _check_n(lv, r, n)
    lr = math.log(r)
    return (D_factor(lam, spec) * _error_bound_factor(lv)
            * upper_incomplete_gamma(lv + 1.0, n * lr) / lr ** (1.0 + lv))


def derivative_error_bound(lam, spec: EllipseSpec, n: int, j: int, *, slack: float = 1.05) -> float:
    """Bound on max|f^(j) - (S_n f)^(j)|:
    slack 2^(1-j-2lam) sqrt(pi) D / (Gamma(lam) Gamma(lam+j+1/2) ln rho) n^(lam+2j) / rho^n."""
    lam = as_lambda(lam)
    lv, r = lam.value, spec.rho
    if not lv > 0:
        raise DomainError("the derivative bound is evaluated for lambda > 0")
    if j < 0:
        raise ValueError("j must be >= 0")
    if j == 0:
        return analytic_error_bound(lam, spec, n, slack=slack)
    _check_n(lv, r, n, lv + 2 * j)
    const = (2.0 ** (1 - j - 2.0 * lv) * math.sqrt(math.pi) * D_factor(lam, spec)
             / (math.gamma(lv) * math.gamma(lv + j + 0.5) * math.log(r)))
    return slack * const * n ** (lv + 2.0 * j) * r ** (-float(n))


@lru_cache(maxsize=32)
def negative_lambda_constant(lam: float, n_max: int = 512, grid: int = 2001, safety: float = 1.1) -> float:
    """Empirical C_lam with |C_n^lam(x)| <= C_lam n^(lam - 1) for -1/2 < lam < 0.

    Maximum of |C_n(x)| n^(1-lam) over n = 1..n_max and a uniform x-grid,
    times ``safety``.
    """
    if not -0.5 < lam < 0.0:
        raise DomainError("C_lambda is only needed for -1/2 < lambda < 0")
    x = np.linspace(-1.0, 1.0, grid)
    rows = eval_C_row(lam, n_max, x)[1:]
    n = np.arange(1, n_max + 1, dtype=float)
    return safety * float(np.max(np.abs(rows).max(axis=1) * n ** (1.0 - lam)))


def piecewise_rate_exponent(lam, m: int) -> float:
    """Predicted algebraic rate for f in C^(m-1), piecewise analytic: -m or -m-1+lam."""
    lv = as_lambda(lam).value
    if m < 1:
        raise DomainError("m must be >= 1")
    if not lv < m + 1:
        raise DomainError("the rate is stated for lambda < m + 1")
    return -float(m) if lv <= 1.0 else -m - 1.0 + lv


def interior_rate_exponent(lam, alpha: float) -> float:
    """Rate for |x - theta|^alpha: -alpha (lam <= 1) or -alpha - 1 + lam."""
    lv = as_lambda(lam).value
    return -alpha if lv <= 1.0 else -alpha - 1.0 + lv


def critical_point_exponents(lam, alpha: float):
    """(endpoint, interior) pointwise exponents at x = +-1 and x = theta."""
    lv = as_lambda(lam).value
    return -alpha - 1.0 + lv, -alpha


def kernel_scaling_exponent(lam, regime: str) -> float:
    """Growth exponent of max|D_n(x, t)|: global (|t| <= 1) or interior (|t| <= 1 - eps)."""
    lam = as_lambda(lam)
    if lam.is_chebyshev:
        raise DomainError("stated for lambda != 0")
    lv = lam.value
    if regime == "global":
        return 2.0 * max(lv, 0.0) + 1.0
    if regime == "interior":
        return max(lv, 1.0)
    raise ValueError("regime must be 'global' or 'interior'")


def fit_rate(errors: Sequence, model: str = "algebraic") -> RateFit:
    """Fit e ~ C n^p (``algebraic``) or e ~ C n^p b^(-n) (``geometric_times_power``).

    ``errors`` is a sequence of (n, e) pairs. Points with e below 1e-14 are
    treated as rounding floor and dropped; at least five must remain.
    """
    data = np.asarray(errors, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError("errors must be (n, e) pairs")
    data = data[data[:, 1] > 1e-14]
    if len(data) < 5:
        raise DomainError("need at least five errors above the rounding floor")
    n, e = data[:, 0], data[:, 1]
    y = np.log(e)
    if model == "algebraic":
        A = np.column_stack([np.ones_like(n), np.log(n)])
    elif model == "geometric_times_power":
        A = np.column_stack([np.ones_like(n), np.log(n), n])
    else:
        raise ValueError("model must be 'algebraic' or 'geometric_times_power'")
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
    base = math.exp(-coef[2]) if model != "algebraic" else None
    return RateFit(float(coef[1]), base, resid, (int(n[0]), int(n[-1])), float(coef[0]))
