"""Test-function registry, degree sweeps and the data behind the figures.

A sweep computes one projection of the largest requested degree and reads
the errors of all lower truncations off it in a single pass; the minimax
baseline is the expensive part and can be thinned out with
``minimax_every``. Output files are plain CSV with ``#`` provenance lines,
plus a gnuplot script per figure.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .bounds import (
    RateFit,
    bernstein_rho,
    critical_point_exponents,
    derivative_error_bound,
    ellipse_max_modulus,
    ellipse_spec,
    fit_rate,
    interior_rate_exponent,
    piecewise_rate_exponent,
)
from .errors import DomainError, RemezError
from .gegenbauer_core import Lambda, as_lambda
from .minimax import remez
from .projection import chebyshev_grid, error_grid, partial_sum_errors, series_with_info
from .quadrature import PiecewiseFn

__all__ = [
    "FunctionSpec",
    "SweepRow",
    "SweepResult",
    "parse_function",
    "run_sweep",
    "run_figure",
    "run_critical_points",
    "run_spectral_diff",
    "FIGURES",
    "write_sweep_csv",
]

REMEZ_MAX_DEGREE = 200
RHO_SHRINK = 1e-3  # bounds use rho (1 - RHO_SHRINK): M is infinite on the critical ellipse


# ---------------------------------------------------------------- functions

def _cauchy_derivative(fc: Callable, x: np.ndarray, j: int, radius: float, points: int = 64):
    """f^(j)(x) = j!/(2 pi i) oint f(z)/(z - x)^(j+1) dz by the trapezoid rule."""
    t = 2.0 * np.pi * np.arange(points) / points
    z = x[:, None] + radius * np.exp(1j * t)[None, :]
    vals = fc(z) * np.exp(-1j * j * t)[None, :]
    return (math.factorial(j) / radius**j * np.mean(vals, axis=1)).real


@dataclass(frozen=True)
class FunctionSpec:
    """A registered test function and its metadata.

    ``smoothness_m`` follows the convention f in C^(m-1) with a jump in the
    m-th derivative; analytic functions carry ``"analytic"`` and fractional
    singularities carry their exponent alpha. ``rho`` is the Bernstein
    parameter of the largest ellipse of analyticity (``inf`` for entire
    functions, ``None`` when f is not analytic on [-1, 1]).
    """

    id: str
    fn: PiecewiseFn = field(repr=False)
    label: str = ""
    rho: float | None = None
    complex_fn: Callable | None = field(default=None, repr=False)
    derivatives: Callable | None = field(default=None, repr=False)
    params: tuple = ()

    @property
    def breakpoints(self):
        return self.fn.breakpoints

    @property
    def smoothness_m(self):
        return self.fn.smoothness_m

    @property
    def is_analytic(self) -> bool:
        return self.fn.is_analytic

    def __call__(self, x):
        return self.fn(x)

    def derivative(self, j: int) -> Callable:
        """Callable for f^(j) on [-1, 1] (analytic functions only)."""
        if j == 0:
            return self.fn
        if not self.is_analytic:
            raise DomainError("derivatives are only provided for analytic functions")
        if self.derivatives is not None:
            return lambda x: self.derivatives(np.asarray(x, dtype=float), j)
        # distance from [-1, 1] to the nearest singularity is at least
        # (rho - 1/rho)/2; use half of it (capped) as the Cauchy radius
        r = 0.5 if not math.isfinite(self.rho) else min(0.5, 0.25 * (self.rho - 1.0 / self.rho))
        return lambda x: _cauchy_derivative(self.complex_fn, np.atleast_1d(np.asarray(x, float)), j, r)


def _trunc_power(k):
    return lambda x: np.where(x >= 0.0, np.maximum(x, 0.0) ** k, 0.0)


def _f3_derivs(x, j):
    # 1/(1 + 9x^2) = Re 1/(1 + 3ix)
    return (math.factorial(j) * (-3j) ** j / (1.0 + 3j * x) ** (j + 1)).real


def _f2_derivs(x, j):
    return (-1.0) ** (j - 1) * math.factorial(j - 1) / (1.2 + x) ** j


def _pole_derivs(omega):
    return lambda x, j: (-1.0) ** j * math.factorial(j) / (x - omega) ** (j + 1)


def _f6(x):
    return np.where(x < 0.0, 2.0 * np.cos(x), 2.0 * x**3 - x * x + 2.0)


def _make(fid: str, params: tuple) -> FunctionSpec:
    if fid == "f1":
        fn = PiecewiseFn(lambda x: np.exp(2.0 * x**3), name="f1")
        return FunctionSpec("f1", fn, "exp(2x^3)", math.inf, lambda z: np.exp(2.0 * z**3))
    if fid == "f2":
        fn = PiecewiseFn(lambda x: np.log(1.2 + x), name="f2")
        return FunctionSpec("f2", fn, "log(1.2+x)", bernstein_rho(-1.2), lambda z: np.log(1.2 + z),
                            _f2_derivs)
    if fid == "f3":
        fn = PiecewiseFn(lambda x: 1.0 / (1.0 + 9.0 * x * x), name="f3")
        return FunctionSpec("f3", fn, "1/(1+9x^2)", bernstein_rho(0.0, 1.0 / 3.0),
                            lambda z: 1.0 / (1.0 + 9.0 * z * z), _f3_derivs)
    if fid == "f4":
        fn = PiecewiseFn(_trunc_power(4), breakpoints=(0.0,), smoothness_m=4, name="f4")
        return FunctionSpec("f4", fn, "(x)_+^4")
    if fid == "f5":
        q = math.pi / 4.0
        fn = PiecewiseFn(lambda x: np.abs(np.sin(4.0 * x)) ** 5, breakpoints=(-q, 0.0, q),
                         smoothness_m=5, name="f5")
        return FunctionSpec("f5", fn, "|sin(4x)|^5")
    if fid == "f6":
        fn = PiecewiseFn(_f6, breakpoints=(0.0,), smoothness_m=3, name="f6")
        return FunctionSpec("f6", fn, "2cos(x) | 2x^3-x^2+2")
    if fid == "tpow":
        (k,) = params
        if k != int(k) or k < 0:
            raise DomainError("tpow needs a non-negative integer power")
        k = int(k)
        fn = PiecewiseFn(_trunc_power(k), breakpoints=(0.0,), smoothness_m=k, name=f"tpow:{k}")
        return FunctionSpec(f"tpow:{k}", fn, f"(x)_+^{k}", params=(k,))
    if fid == "pole":
        (omega,) = params
        if not omega > 1.0:
            raise DomainError("pole needs omega > 1")
        fn = PiecewiseFn(lambda x: 1.0 / (x - omega), name=f"pole:{omega:g}")
        return FunctionSpec(f"pole:{omega:g}", fn, f"1/(x-{omega:g})", bernstein_rho(omega),
                            lambda z: 1.0 / (z - omega), _pole_derivs(omega), params)
    if fid == "endpoint":
        (alpha,) = params
        if not alpha > 0:
            raise DomainError("endpoint exponent must be positive")
        fn = PiecewiseFn(lambda x: np.maximum(1.0 + x, 0.0) ** alpha, smoothness_m=alpha,
                         singular_points=(-1.0,), name=f"endpoint:{alpha:g}")
        return FunctionSpec(f"endpoint:{alpha:g}", fn, f"(1+x)^{alpha:g}", params=params)
    if fid == "arccos":
        fn = PiecewiseFn(lambda x: np.arccos(np.clip(x, -1.0, 1.0)), smoothness_m=0.5,
                         singular_points=(-1.0, 1.0), name="arccos")
        return FunctionSpec("arccos", fn, "arccos(x)")
    if fid == "interior":
        theta, alpha = params
        if not -1.0 < theta < 1.0 or not alpha > 0:
            raise DomainError("interior needs -1 < theta < 1 and alpha > 0")
        fn = PiecewiseFn(lambda x: np.abs(x - theta) ** alpha, breakpoints=(theta,), smoothness_m=alpha,
                         singular_points=(theta,), name=f"interior:{theta:g}:{alpha:g}")
        return FunctionSpec(f"interior:{theta:g}:{alpha:g}", fn, f"|x-{theta:g}|^{alpha:g}",
                            params=params)
    raise DomainError(f"unknown function id {fid!r}")


_ARITY = {"f1": 0, "f2": 0, "f3": 0, "f4": 0, "f5": 0, "f6": 0, "arccos": 0,
          "pole": 1, "endpoint": 1, "tpow": 1, "interior": 2}


def _number(text: str) -> float:
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


def parse_function(text: str) -> FunctionSpec:
    """Build a FunctionSpec from ``id[:p1[:p2]]``, e.g. ``pole:1.5`` or ``interior:0.25:1.5``.

    Parameters accept simple fractions such as ``3/2``.
    """
    parts = text.strip().split(":")
    fid = parts[0].lower()
    if fid not in _ARITY:
        raise DomainError(f"unknown function id {fid!r}; known: {', '.join(sorted(_ARITY))}")
    if len(parts) - 1 != _ARITY[fid]:
        raise DomainError(f"{fid} takes {_ARITY[fid]} parameter(s)")
    try:
        params = tuple(_number(p) for p in parts[1:])
    except ValueError as exc:
        raise DomainError(f"bad parameter in {text!r}") from exc
    return _make(fid, params)


# ------------------------------------------------------------------- sweeps

STATUS_OK = "ok"
STATUS_REMEZ = "remez_failed"
STATUS_QUAD = "quad_warn"


@dataclass(frozen=True)
class SweepRow:
    n: int
    err_proj: float
    err_minimax: float
    R: float
    scaled_R: float
    status: str = STATUS_OK


@dataclass
class SweepResult:
    """Rows of one sweep plus the rate fit of the projection errors."""

    function: str
    lam: Lambda
    rows: list
    fit: RateFit | None
    grid: int
    quad: int
    scaling: str

    @property
    def n(self) -> np.ndarray:
        return np.array([r.n for r in self.rows])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    @property
    def flagged(self) -> bool:
        return any(r.status != STATUS_OK for r in self.rows)


def _scaling_rule(spec: FunctionSpec, lam: Lambda):
    lv = lam.value
    if spec.is_analytic and lv > 0:
        return "n^(-lambda) R", lambda n: n ** (-lv)
    if not spec.is_analytic and lv > 1:
        return "n^(1-lambda) R", lambda n: n ** (1.0 - lv)
    return "R", lambda n: 1.0


def _fit_errors(spec: FunctionSpec, ns, errs, floor: float):
    pts = [(n, e) for n, e in zip(ns, errs) if n > 0 and np.isfinite(e) and e > floor]
    model = "geometric_times_power" if spec.is_analytic else "algebraic"
    if len(pts) < 5:
        return None
    return fit_rate(pts, model)


def run_sweep(spec: FunctionSpec, lam, n_list: Sequence[int], *, minimax: bool = True,
              minimax_every: int = 1, grid: int = 10001, quad: int | None = None,
              fit_floor: float = 1e-13) -> SweepResult:
    """Projection (and optionally minimax) errors of ``spec`` for every n in ``n_list``.

    Remez runs only on every ``minimax_every``-th entry of ``n_list`` (the last
    entry always included) and never above degree 200; rows without a baseline carry NaN in the minimax,
    R and scaled_R columns. A failed Remez run flags its own row as
    ``remez_failed``; a projection whose quadrature never settled flags every
    row as ``quad_warn``. Neither aborts the sweep.
    """
    lam = as_lambda(lam)
    ns = [int(n) for n in n_list]
    if not ns:
        raise ValueError("empty degree list")
    if any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 0:
        raise ValueError("n_list must be increasing and non-negative")
    info = series_with_info(spec.fn, lam, ns[-1], quad=quad)
    reports = partial_sum_errors(spec.fn, info.series, ns, grid)
    xs = error_grid(spec.fn, grid)
    scale = max(float(np.max(np.abs(spec.fn(xs)))), 1.0)
    label, factor = _scaling_rule(spec, lam)
    eligible = [n for n in ns if n <= REMEZ_MAX_DEGREE]
    with_remez = set(eligible[::max(1, minimax_every)]) | set(eligible[-1:]) if minimax else set()
    rows = []
    for n, rep in zip(ns, reports):
        status = STATUS_OK if info.settled else STATUS_QUAD
        e_best = math.nan
        if n in with_remez:
            try:
                e_best = remez(spec.fn, n).max_error
            except RemezError as exc:
                status = STATUS_REMEZ
                if exc.result is not None:
                    e_best = exc.result.max_error
        e_proj = rep.max_error
        if status == STATUS_REMEZ or not np.isfinite(e_best):
            ratio = math.nan
        elif e_proj < 1e-13 * scale and e_best < 1e-13 * scale:
            ratio = math.nan
        else:
            ratio = e_proj / e_best
        rows.append(SweepRow(n, e_proj, e_best, ratio, ratio * factor(n) if n > 0 else math.nan, status))
    fit = _fit_errors(spec, ns, [r.err_proj for r in rows], fit_floor * scale)
    return SweepResult(spec.id, lam, rows, fit, len(xs), info.quad_size, label)


# --------------------------------------------------------------------- CSV

def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % v


def _lam_text(lam: Lambda) -> str:
    return "0 (Chebyshev limit)" if lam.is_chebyshev else "%.17g" % lam.value


def _write_csv(path: str, header: dict, columns: Sequence[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, val in header.items():
            fh.write(f"# {key}: {val}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def sweep_header(res: SweepResult, spec: FunctionSpec | None = None, extra: dict | None = None) -> dict:
    head = {
        "generator": f"gegenrates {__version__}",
        "function": res.function + (f" = {spec.label}" if spec is not None and spec.label else ""),
        "lambda": _lam_text(res.lam),
        "grid": res.grid,
        "quad": res.quad,
        "scaled_R": res.scaling,
    }
    if res.fit is not None:
        head["fit_exponent"] = "%.6g" % res.fit.exponent
        if res.fit.geometric_base is not None:
            head["fit_geometric_base"] = "%.8g" % res.fit.geometric_base
    head.update(extra or {})
    return head


def write_sweep_csv(path: str, res: SweepResult, spec: FunctionSpec | None = None, extra: dict | None = None):
    rows = ((r.n, r.err_proj, r.err_minimax, r.R, r.scaled_R, r.status) for r in res.rows)
    _write_csv(path, sweep_header(res, spec, extra),
               ("n", "err_proj", "err_minimax", "R", "scaled_R", "status"), rows)


# -------------------------------------------------------- critical points

@dataclass
class CriticalPointTable:
    """Pointwise errors at x = -1, theta, 1 and the overall max error, per n."""

    theta: float
    alpha: float
    lam: Lambda
    n: np.ndarray
    err_left: np.ndarray
    err_theta: np.ndarray
    err_right: np.ndarray
    err_max: np.ndarray
    quad: int

    def fits(self, window: float = 0.1) -> dict:
        """Algebraic fits of the upper envelope of each error column.

        Pointwise errors oscillate in n (like cos(n arccos theta) at the
        endpoints), so the rates are bounds on an envelope rather than on
        individual values. The envelope at n is the largest error over degrees
        within a relative distance ``window`` of n; use a dense degree list.
        """
        out = {}
        for name in ("err_left", "err_theta", "err_right", "err_max"):
            env = upper_envelope(self.n, getattr(self, name), window)
            try:
                out[name] = fit_rate(list(zip(self.n, env)), "algebraic")
            except DomainError:
                out[name] = None
        return out

    def predicted(self) -> dict:
        end, inner = critical_point_exponents(self.lam, self.alpha)
        return {"err_left": end, "err_theta": inner, "err_right": end,
                "err_max": interior_rate_exponent(self.lam, self.alpha)}


def upper_envelope(n, values, window: float = 0.1) -> np.ndarray:
    """Running maximum of ``values`` over degrees in [n (1 - window), n (1 + window)]."""
    n = np.asarray(n, dtype=float)
    v = np.asarray(values, dtype=float)
    return np.array([v[(n >= k * (1 - window)) & (n <= k * (1 + window))].max() for k in n])


def run_critical_points(theta: float, alpha: float, lam, n_list: Sequence[int], *,
                        grid: int = 10001, quad: int | None = None) -> CriticalPointTable:
    """Errors of S_n at the critical points of |x - theta|^alpha."""
    lam = as_lambda(lam)
    spec = _make("interior", (float(theta), float(alpha)))
    ns = [int(n) for n in n_list]
    info = series_with_info(spec.fn, lam, ns[-1], quad=quad)
    coeffs = info.series.coeffs
    pts = np.array([-1.0, theta, 1.0])
    from .gegenbauer_core import eval_C_row

    rows = eval_C_row(lam, ns[-1], pts) * coeffs[:, None]
    partial = np.cumsum(rows, axis=0)
    exact = spec.fn(pts)
    crit = np.abs(exact[None, :] - partial[ns])
    maxes = np.array([r.max_error for r in partial_sum_errors(spec.fn, info.series, ns, grid)])
    return CriticalPointTable(theta, alpha, lam, np.array(ns), crit[:, 0], crit[:, 1], crit[:, 2],
                              maxes, info.quad_size)


# --------------------------------------------------- spectral derivatives

@dataclass
class SpectralDiffTable:
    function: str
    lam: Lambda
    j: int
    n: np.ndarray
    err: np.ndarray
    bound: np.ndarray
    rho: float
    fit: RateFit | None


def _bound_spec(spec: FunctionSpec, rho: float | None = None):
    if rho is None:
        rho = spec.rho
        if rho is None or not math.isfinite(rho):
            raise DomainError(f"{spec.id} has no finite Bernstein parameter; pass rho explicitly")
        rho *= 1.0 - RHO_SHRINK
    return ellipse_spec(rho, ellipse_max_modulus(spec.complex_fn, rho))


def run_spectral_diff(spec: FunctionSpec, lam, j: int, n_list: Sequence[int], *, grid: int = 10001,
                      slack: float = 1.05, rho: float | None = None) -> SpectralDiffTable:
    """Sup-errors of the j-th derivative of S_n f against the analytic bound.

    Derivatives of the projection use the basis shift d/dx C^lam = 2 lam C^(lam+1).
    Rows where the bound is not yet valid (n too small) carry NaN.
    """
    from .gegenbauer_core import clenshaw

    lam = as_lambda(lam)
    if not spec.is_analytic:
        raise DomainError("spectral differentiation bounds need an analytic function")
    if j < 0:
        raise ValueError("j must be >= 0")
    ns = [int(n) for n in n_list]
    info = series_with_info(spec.fn, lam, ns[-1])
    x = chebyshev_grid(grid)
    exact = spec.derivative(j)(x)
    ell = _bound_spec(spec, rho)
    errs, bounds = [], []
    for n in ns:
        s = info.series.truncate(n)
        if j == 0:
            approx = s(x)
        elif j > n:
            approx = np.zeros_like(x)
        else:
            d = s.derivative(j)
            approx = clenshaw(d.lam, d.coeffs, x)
        errs.append(float(np.max(np.abs(exact - approx))))
        try:
            bounds.append(derivative_error_bound(lam, ell, n, j, slack=slack))
        except DomainError:
            bounds.append(math.nan)
    scale = max(float(np.max(np.abs(exact))), 1.0)
    fit = _fit_errors(spec, ns, errs, 1e-12 * scale)
    return SpectralDiffTable(spec.id, lam, j, np.array(ns), np.array(errs), np.array(bounds), ell.rho, fit)


# ------------------------------------------------------------------ figures

@dataclass(frozen=True)
class SweepPlan:
    function: str
    lams: tuple
    n: tuple
    minimax: bool = True


@dataclass(frozen=True)
class FigureDef:
    title: str
    sweeps: tuple
    kind: str = "sweep"  # sweep | pointwise | logR


def _rng(a, b, step=1):
    return tuple(range(a, b + 1, step))


# Degree ranges are not stated for the analytic figures; they end where the
# minimax error of each function reaches roughly 1e-13, past which R is
# rounding noise.
FIGURES = {
    1: FigureDef("analytic functions, lambda in (-1/2, 0]",
                 tuple(SweepPlan(f, (-0.4, -0.1), n) for f, n in
                       (("f1", _rng(2, 30)), ("f2", _rng(2, 36)), ("f3", _rng(2, 72))))),
    2: FigureDef("analytic functions, lambda > 0",
                 tuple(SweepPlan(f, (1.0, 2.0), n) for f, n in
                       (("f1", _rng(2, 30)), ("f2", _rng(2, 36)), ("f3", _rng(2, 72))))),
    3: FigureDef("piecewise analytic functions, lambda in (-1/2, 1]",
                 tuple(SweepPlan(f, (-0.2, 0.9), _rng(2, 250)) for f in ("f4", "f5", "f6"))),
    4: FigureDef("piecewise analytic functions, lambda > 1",
                 tuple(SweepPlan(f, (1.5, 3.0), _rng(2, 250)) for f in ("f4", "f5", "f6"))),
    5: FigureDef("projection rates for piecewise analytic functions",
                 tuple(SweepPlan(f, (0.5, 1.0, 1.5, 3.0), _rng(2, 250), False) for f in ("f4", "f5", "f6"))),
    6: FigureDef("endpoint singularities",
                 tuple(SweepPlan(f, (0.5, 1.0, 2.0, 3.0), _rng(2, 250)) for f in ("endpoint:3/2", "arccos"))),
    7: FigureDef("pointwise error of |x-1/4|^(3/2), n = 30", (), "pointwise"),
    8: FigureDef("interior singularity |x+0.4|^(5/2)",
                 (SweepPlan("interior:-0.4:5/2", (1 / 6, 1 / 3, 2 / 3, 1.0), _rng(2, 250)),
                  SweepPlan("interior:-0.4:5/2", (1.5, 2.0, 2.5, 3.0), _rng(2, 250), False))),
}


def _predicted_exponent(spec: FunctionSpec, lam: Lambda):
    m = spec.smoothness_m
    fid = spec.id.split(":")[0]
    if fid in ("f4", "f5", "f6"):
        return piecewise_rate_exponent(lam, int(m))
    if fid == "endpoint":
        return -2.0 * spec.params[0]
    if fid == "arccos":
        return -1.0
    if fid == "interior":
        return interior_rate_exponent(lam, spec.params[1])
    return None


def _slug(text: str) -> str:
    return text.replace(":", "_").replace("/", "-")


def _lam_slug(lv: float) -> str:
    return ("%.6g" % lv).replace("-", "m")


def _gnuplot_sweeps(fig_id: int, fdef: FigureDef, files: list) -> str:
    lines = [f"# gnuplot script for figure {fig_id}: {fdef.title}",
             "set datafile separator ','", "set logscale y", "set key outside",
             "set xlabel 'n'", "set format y '%.0e'"]
    if fig_id in (3, 4, 5, 6, 8):
        lines.append("set logscale x")
    lines.append(f"set terminal pngcairo size 1200,800\nset output 'figure{fig_id}.png'")
    plots = []
    seen_minimax = set()
    for path, func, lv, with_minimax in files:
        name = os.path.basename(path)
        plots.append(f"'{name}' using 1:2 with linespoints title '{func} S_n lambda={lv:g}'")
        if with_minimax and func not in seen_minimax:
            seen_minimax.add(func)
            plots.append(f"'{name}' using 1:3 with points pt 7 title '{func} B_n'")
    lines.append("plot " + ", \\\n     ".join(plots))
    if fig_id in (1, 2, 3, 4):
        lines.append("set output 'figure%d_R.png'" % fig_id)
        lines.append("plot " + ", \\\n     ".join(
            f"'{os.path.basename(p)}' using 1:5 with points title '{fn} lambda={lv:g}'" for p, fn, lv, _ in files))
    return "\n".join(lines) + "\n"


def _figure7(out_dir: str, grid: int) -> list:
    theta, alpha, n = 0.25, 1.5, 30
    spec = _make("interior", (theta, alpha))
    x = np.linspace(-1.0, 1.0, 2001)
    crit = np.array([-1.0, theta, 1.0])
    lams = (-0.4, 0.75, 2.0)
    cols, crit_rows, quads = [], [], []
    for lv in lams:
        info = series_with_info(spec.fn, lv, n)
        quads.append(info.quad_size)
        cols.append(np.abs(spec.fn(x) - info.series(x)))
        crit_rows.append(np.abs(spec.fn(crit) - info.series(crit)))
    head = {"generator": f"gegenrates {__version__}", "function": f"{spec.id} = {spec.label}",
            "n": n, "lambda": " ".join("%.17g" % v for v in lams), "grid": len(x),
            "quad": " ".join(str(q) for q in quads)}
    p1 = os.path.join(out_dir, "fig7_pointwise.csv")
    _write_csv(p1, head, ["x"] + [f"err_lam_{_lam_slug(v)}" for v in lams],
               (tuple([xi] + [c[i] for c in cols]) for i, xi in enumerate(x)))
    p2 = os.path.join(out_dir, "fig7_critical.csv")
    _write_csv(p2, head, ["x"] + [f"err_lam_{_lam_slug(v)}" for v in lams],
               (tuple([xc] + [r[i] for r in crit_rows]) for i, xc in enumerate(crit)))
    script = ["# gnuplot script for figure 7: pointwise error of |x-1/4|^(3/2), n = 30",
              "set datafile separator ','", "set xlabel 'x'", "set ylabel '|f - S_n f|'",
              "set terminal pngcairo size 1500,450", "set output 'figure7.png'",
              "set multiplot layout 1,3"]
    for i, lv in enumerate(lams):
        script.append(f"set title 'lambda = {lv:g}'")
        script.append(f"plot 'fig7_pointwise.csv' using 1:{i + 2} with lines notitle, "
                      f"'fig7_critical.csv' using 1:{i + 2} with points pt 7 lc rgb 'red' notitle")
    script.append("unset multiplot")
    p3 = os.path.join(out_dir, "figure7.gp")
    with open(p3, "w", encoding="utf-8") as fh:
        fh.write("\n".join(script) + "\n")
    return [p1, p2, p3]


def run_figure(figure_id: int, out_dir: str, *, grid: int = 10001, quad: int | None = None,
               minimax: bool = True, minimax_every: int = 4, progress: Callable | None = None) -> tuple:
    """Write the CSV files and gnuplot script for one figure.

    Returns ``(paths, flagged)`` where ``flagged`` tells whether any sweep row
    was marked as failed.
    """
    if figure_id not in FIGURES:
        raise DomainError(f"figure id must be one of {sorted(FIGURES)}")
    os.makedirs(out_dir, exist_ok=True)
    fdef = FIGURES[figure_id]
    if fdef.kind == "pointwise":
        return _figure7(out_dir, grid), False
    files, paths, flagged = [], [], False
    for plan in fdef.sweeps:
        spec = parse_function(plan.function)
        for lv in plan.lams:
            lam = as_lambda(lv)
            res = run_sweep(spec, lam, plan.n, minimax=minimax and plan.minimax,
                            minimax_every=minimax_every, grid=grid, quad=quad)
            flagged |= res.flagged
            extra = {"figure": figure_id}
            pred = _predicted_exponent(spec, lam)
            if pred is not None:
                extra["predicted_exponent"] = "%.6g" % pred
            if spec.rho is not None and math.isfinite(spec.rho):
                extra["bernstein_rho"] = "%.12g" % spec.rho
            path = os.path.join(out_dir, f"fig{figure_id}_{_slug(spec.id)}_lam_{_lam_slug(lam.value)}.csv")
            write_sweep_csv(path, res, spec, extra)
            files.append((path, spec.id, lam.value, minimax and plan.minimax))
            paths.append(path)
            if progress is not None:
                progress(path)
    gp = os.path.join(out_dir, f"figure{figure_id}.gp")
    with open(gp, "w", encoding="utf-8") as fh:
        fh.write(_gnuplot_sweeps(figure_id, fdef, files))
    paths.append(gp)
    return paths, flagged


def critical_points_rows(table: CriticalPointTable):
    return [(int(n), a, b, c, d) for n, a, b, c, d in
            zip(table.n, table.err_left, table.err_theta, table.err_right, table.err_max)]


def spectral_diff_rows(table: SpectralDiffTable):
    return [(int(n), e, b) for n, e, b in zip(table.n, table.err, table.bound)]


__all__ += ["CriticalPointTable", "SpectralDiffTable", "SweepPlan", "FigureDef",
            "critical_points_rows", "upper_envelope", "spectral_diff_rows", "sweep_header"]
