"""Gegenbauer projections, their convergence rates, and a minimax baseline.

Typical use::

    from gegenrates import compute_series, max_error, remez
    f = lambda x: 1 / (1 + 9 * x**2)
    s = compute_series(f, 1.0, 40)
    max_error(f, s).max_error / remez(f, 40).max_error
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DegreeUnderflowError,
    DomainError,
    GegenratesError,
    QuadratureAccuracyError,
    RemezError,
)
from .gegenbauer_core import GegenbauerSeries, Lambda, as_lambda, eval_C, norm_h  # noqa: E402
from .minimax import MinimaxResult, remez  # noqa: E402
from .projection import compute_series, indicator_R, lebesgue_constant, max_error  # noqa: E402
from .quadrature import PiecewiseFn, QuadratureRule, gauss_gegenbauer_rule  # noqa: E402

__all__ = [
    "__version__",
    "ConvergenceError",
    "DegreeUnderflowError",
    "DomainError",
    "GegenratesError",
    "QuadratureAccuracyError",
    "RemezError",
    "GegenbauerSeries",
    "Lambda",
    "as_lambda",
    "eval_C",
    "norm_h",
    "MinimaxResult",
    "remez",
    "compute_series",
    "indicator_R",
    "lebesgue_constant",
    "max_error",
    "PiecewiseFn",
    "QuadratureRule",
    "gauss_gegenbauer_rule",
]
