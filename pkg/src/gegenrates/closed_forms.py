"""Exact and asymptotic Gegenbauer coefficients of model singular functions.

Covered models: a simple real pole 1/(x - omega), the endpoint power
(1 + x)^alpha, the truncated power (x)_+^5 and the interior power
|x - theta|^alpha. Gamma-function prefactors are handled in log space with
explicit signs so that k in the thousands does not overflow.

In the Chebyshev limit (``Lambda.chebyshev()``) the coefficient of T_k is
(2/k) lim lam a_k^lam; in every formula below this amounts to replacing
Gamma(lam) (k + lam) by 2 for k >= 1 (by 1 for k = 0) and setting lam = 0
elsewhere.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gegenbauer_core import Lambda, as_lambda
from .special_fn import gauss_2f1, log_abs_gamma, sinpi

__all__ = [
    "InteriorSingularity",
    "OutsideProvenRangeWarning",
    "RatioPrediction",
    "pole_coefficients",
    "endpoint_coefficients",
    "endpoint_error_constant",
    "truncated_power5_coefficients",
    "interior_coefficients",
    "interior_coefficient_table",
    "interior_asymptotic",
    "legendre_chebyshev_ratio",
]


class OutsideProvenRangeWarning(UserWarning):
    """An interior coefficient was evaluated below k = alpha + 1."""


@dataclass(frozen=True)
class InteriorSingularity:
    """The model |x - theta|^alpha with an interior singular point theta."""

    theta: float
    alpha: float

    def __post_init__(self):
        if not -1.0 < self.theta < 1.0:
            raise DomainError("theta must lie strictly inside (-1, 1)")
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")

    @property
    def phi(self) -> float:
        return math.acos(math.sqrt(0.5 * (1.0 + self.theta)))

    def __call__(self, x):
        x = np.asarray(x)
        if x.dtype != np.longdouble:
            x = x.astype(float)
        return np.abs(x - self.theta) ** self.alpha


@dataclass(frozen=True)
class RatioPrediction:
    value: float
    excluded: bool


def _lam_weight(lam: Lambda, k: int):
    """(log|Gamma(lam)(k + lam)|, sign), with the Chebyshev-limit replacement."""
    if lam.is_chebyshev:
        return (math.log(2.0) if k >= 1 else 0.0), 1.0
    lg, s = log_abs_gamma(lam.value)
    kl = k + lam.value
    return lg + math.log(abs(kl)), s * math.copysign(1.0, kl)


def _signed_exp(terms):
    log_sum = sum(t[0] for t in terms)
    sign = 1.0
    for t in terms:
        sign *= t[1]
    return sign * math.exp(log_sum)


def _log_rgamma(x: float):
    """(log|1/Gamma(x)|, sign); sign 0 at the poles where 1/Gamma vanishes."""
    if x <= 0 and x == math.floor(x):
        return 0.0, 0.0
    lg, s = log_abs_gamma(x)
    return -lg, s


def pole_coefficients(omega: float, lam, k_max: int) -> np.ndarray:
    """a_0..a_{k_max} of f(x) = 1/(x - omega), omega > 1.

    a_k = -2 Gamma(lam) k! / Gamma(k + lam) u^(-k-1) 2F1(k+1, 1-lam; k+lam+1; u^-2)
    with u = omega + sqrt(omega^2 - 1).
    """
    if not omega > 1.0:
        raise DomainError("the pole must satisfy omega > 1")
    lam = as_lambda(lam)
    u = omega + math.sqrt(omega * omega - 1.0)
    z = u ** -2
    lv = lam.value
    out = np.empty(k_max + 1)
    for k in range(k_max + 1):
        if lam.is_chebyshev:
            # lam -> 0 limit: the 2F1 collapses to 1 / (1 - z)
            out[k] = -(2.0 if k == 0 else 4.0) * u ** (-k - 1) / (1.0 - z)
            continue
        lg_l, s_l = log_abs_gamma(lv)
        lg_kl, s_kl = log_abs_gamma(k + lv)
        log_c = lg_l + math.lgamma(k + 1.0) - lg_kl
        hyp = gauss_2f1(k + 1.0, 1.0 - lv, k + lv + 1.0, z)
        out[k] = -2.0 * s_l * s_kl * math.exp(log_c - (k + 1) * math.log(u)) * hyp
    return out


def endpoint_coefficients(alpha: float, lam, k: int) -> float:
    """a_k of (1 + x)^alpha.

    Integer alpha gives 0 for k > alpha because sin(alpha pi) vanishes; the
    polynomial's low coefficients are not what this formula is for.
    """
    lam = as_lambda(lam)
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if alpha == math.floor(alpha):
        if k > alpha:
            return 0.0
        raise DomainError("integer alpha: the formula only covers k > alpha")
    lv = lam.value
    s = float(sinpi(alpha))
    terms = [
        _lam_weight(lam, k),
        ((2.0 * lv + alpha) * math.log(2.0), 1.0),
        (math.log(abs(s)), math.copysign(1.0, s)),
        log_abs_gamma(alpha + lv + 0.5),
        (math.lgamma(alpha + 1.0), 1.0),
        log_abs_gamma(k - alpha),
        _log_rgamma(k + alpha + 2.0 * lv + 1.0),
        (-1.5 * math.log(math.pi), 1.0),
        (0.0, -1.0 if k % 2 == 0 else 1.0),
    ]
    return _signed_exp(terms)


def endpoint_error_constant(alpha: float, lam) -> float:
    """Leading constant of n^(-2 alpha) in max|(1+x)^alpha - S_n(1+x)^alpha|, lam > 0."""
    lv = as_lambda(lam).value
    return (2.0**alpha * abs(float(sinpi(alpha))) * math.gamma(alpha + lv + 0.5) * math.gamma(alpha)
            / (math.pi * math.gamma(lv + 0.5)))


def truncated_power5_coefficients(lam, k: int) -> float:
    """a_k of (x)_+^5: (15/8) Gamma(lam)(k+lam) / (Gamma(lam+(k+7)/2) Gamma((7-k)/2))."""
    lam = as_lambda(lam)
    terms = [
        _lam_weight(lam, k),
        (math.log(15.0 / 8.0), 1.0),
        _log_rgamma(lam.value + 0.5 * (k + 7)),
        _log_rgamma(0.5 * (7 - k)),
    ]
    return _signed_exp(terms)


def _gegenbauer_function_seed(nu: float, mu: float, x: float) -> float:
    return gauss_2f1(-nu, nu + 2.0 * mu, mu + 0.5, 0.5 * (1.0 - x))


def _gegenbauer_functions(mu: float, nu0: float, count: int, x: float) -> np.ndarray:
    """G_{nu0 + j}(x) = 2F1(-nu, nu + 2 mu; mu + 1/2; (1 - x)/2), j = 0..count-1.

    Two series seeds, then the recurrence
    (nu + 2 mu) G_{nu+1} = 2 (nu + mu) x G_nu - nu G_{nu-1}.
    """
    g = np.empty(count)
    g[0] = _gegenbauer_function_seed(nu0, mu, x)
    if count > 1:
        g[1] = _gegenbauer_function_seed(nu0 + 1.0, mu, x)
    for j in range(2, count):
        nu = nu0 + j - 1.0
        g[j] = (2.0 * (nu + mu) * x * g[j - 1] - nu * g[j - 2]) / (nu + 2.0 * mu)
    return g


def interior_coefficient_table(s: InteriorSingularity, lam, k_max: int) -> np.ndarray:
    """a_0..a_{k_max} of |x - theta|^alpha from the two-term hypergeometric formula.

    Entries with k < alpha + 1 lie outside the range where the formula is
    proven; they are computed anyway and are usually still correct.
    """
    lam = as_lambda(lam)
    theta, alpha = s.theta, s.alpha
    lv = lam.value
    mu = lv + alpha + 1.0
    nu0 = -alpha - 1.0
    gp = _gegenbauer_functions(mu, nu0, k_max + 1, theta)
    gm = _gegenbauer_functions(mu, nu0, k_max + 1, -theta)
    log_pre = ((mu - 0.5) * math.log1p(-theta * theta) + math.lgamma(alpha + 1.0)
               - (1.0 + alpha) * math.log(2.0) - 0.5 * math.log(math.pi))
    lg, sg = log_abs_gamma(lv + alpha + 1.5)
    log_pre -= lg
    out = np.empty(k_max + 1)
    for k in range(k_max + 1):
        lw, sw = _lam_weight(lam, k)
        bracket = gp[k] + (-1.0 if k % 2 else 1.0) * gm[k]
        out[k] = sg * sw * math.exp(log_pre + lw) * bracket
    return out


def interior_coefficients(s: InteriorSingularity, lam, k: int, *, permissive: bool = False) -> float:
    """a_k of |x - theta|^alpha, proven for k >= alpha + 1.

    Below that range a DomainError is raised unless ``permissive`` is set, in
    which case the value is returned with an OutsideProvenRangeWarning.
    """
    if k < s.alpha + 1.0:
        if not permissive:
            raise DomainError(f"k = {k} is below alpha + 1 = {s.alpha + 1.0}")
        warnings.warn(f"k = {k} is outside the proven range k >= alpha + 1",
                      OutsideProvenRangeWarning, stacklevel=2)
    return float(interior_coefficient_table(s, lam, k)[k])


def interior_asymptotic(s: InteriorSingularity, lam, k):
    """Leading large-k term of the interior coefficients (vectorized over k)."""
    lam = as_lambda(lam)
    lv = lam.value
    k = np.asarray(k, dtype=float)
    alpha, theta = s.alpha, s.theta
    omega = (1.0 - theta * theta) ** (0.5 * (lv + alpha))
    # Gamma(lam) ~ Gamma(lam)(k + lam)/k, which becomes 2/k in the Chebyshev limit
    g_lam = 2.0 / k if lam.is_chebyshev else math.gamma(lv)
    scale = 2.0 ** (1.0 + lv) * g_lam * math.gamma(alpha + 1.0) / math.pi
    val = (-omega * float(sinpi(0.5 * alpha)) * scale * k ** (-alpha - lv)
           * np.cos(2.0 * (k + lv) * s.phi - 0.5 * lv * math.pi))
    return float(val) if val.ndim == 0 else val


def legendre_chebyshev_ratio(s: InteriorSingularity, k: int, min_denominator: float = 0.1) -> RatioPrediction:
    """Leading-order prediction of a_k^Legendre / a_k^Chebyshev.

    The prediction is flagged ``excluded`` when |cos(2 k phi)| < min_denominator.
    """
    phi = s.phi
    den = math.cos(2.0 * k * phi)
    value = ((1.0 - s.theta**2) ** 0.25 * math.cos((2 * k + 1) * phi - 0.25 * math.pi) / den
             * math.sqrt(0.5 * math.pi * k))
    return RatioPrediction(value, abs(den) < min_denominator)
