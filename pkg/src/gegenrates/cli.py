"""Command-line entry point: ``gegenrates <subcommand> [options]``.

Exit status is 0 on success, 2 when some rows were flagged (failed Remez
runs, unsettled quadrature) and 1 on usage or fatal errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import GegenratesError

EXIT_OK, EXIT_FATAL, EXIT_PARTIAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FATAL, f"{self.prog}: error: {message}\n")


def parse_degrees(text: str) -> list:
    """``a..b[:step]``, a comma list, or a single integer."""
    text = text.strip()
    try:
        if ".." in text:
            span, _, step = text.partition(":")
            a, b = span.split("..", 1)
            a, b, st = int(a), int(b), int(step) if step else 1
            if st < 1 or b < a:
                raise ValueError
            return list(range(a, b + 1, st))
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad degree list {text!r}; use a..b[:step], a,b,c or n") from None
    if any(v < 0 for v in vals) or any(b <= a for a, b in zip(vals, vals[1:])):
        raise argparse.ArgumentTypeError("degrees must be non-negative and increasing")
    return vals


def _real(text: str) -> float:
    from .experiments import _number

    try:
        return _number(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _fmt(v) -> str:
    return "%.17g" % v


def _open_out(args, default_name: str):
    if not args.out:
        return sys.stdout, False
    if os.path.isdir(args.out) or args.out.endswith(os.sep):
        os.makedirs(args.out, exist_ok=True)
        return open(os.path.join(args.out, default_name), "w", encoding="utf-8"), True
    return open(args.out, "w", encoding="utf-8"), True


def _emit(args, name: str, header: dict, columns, rows):
    fh, close = _open_out(args, name)
    try:
        for k, v in header.items():
            fh.write(f"# {k}: {v}\n")
        fh.write(",".join(columns) + "\n")
        for r in rows:
            fh.write(",".join(v if isinstance(v, str) else str(v) if isinstance(v, (int, np.integer))
                              else _fmt(v) for v in r) + "\n")
    finally:
        if close:
            fh.close()


# ----------------------------------------------------------------- commands

def cmd_project(args) -> int:
    from .experiments import parse_function
    from .projection import max_error, series_with_info

    spec = parse_function(args.func)
    n = args.n[-1]
    info = series_with_info(spec.fn, args.lam, n, quad=args.quad)
    rep = max_error(spec.fn, info.series, args.grid)
    header = {"function": spec.id, "lambda": _fmt(args.lam), "n": n, "quad": info.quad_size,
              "grid": rep.grid_size, "max_error": _fmt(rep.max_error), "argmax_x": _fmt(rep.argmax_x)}
    if args.eval:
        xs = [_real(t) for t in args.eval.split(",")]
        vals = info.series(np.array(xs))
        _emit(args, "project.csv", header, ("x", "S_n", "f"),
              ((x, v, float(spec.fn(np.array(x)))) for x, v in zip(xs, np.atleast_1d(vals))))
    else:
        _emit(args, "project.csv", header, ("k", "a_k"), enumerate(info.series.coeffs))
    return EXIT_OK if info.settled else EXIT_PARTIAL


def cmd_minimax(args) -> int:
    from .errors import RemezError
    from .experiments import parse_function
    from .minimax import remez

    spec = parse_function(args.func)
    n = args.n[-1]
    status = EXIT_OK
    try:
        res = remez(spec.fn, n)
    except RemezError as exc:
        if exc.result is None:
            raise
        print(f"warning: {exc}", file=sys.stderr)
        res, status = exc.result, EXIT_PARTIAL
    header = {"function": spec.id, "n": n, "max_error": _fmt(res.max_error),
              "levelled_error": _fmt(res.levelled_error), "iterations": res.iterations,
              "converged": res.converged, "defect": _fmt(res.defect)}
    _emit(args, "minimax.csv", header, ("x", "B_n", "f_minus_B_n"),
          ((x, p, float(spec.fn(np.array(x))) - p) for x, p in zip(res.reference, res.poly_values)))
    return status


def cmd_coeffs(args) -> int:
    from . import closed_forms as cf
    from .experiments import parse_function
    from .projection import series_with_info

    spec = parse_function(args.func)
    kind = spec.id.split(":")[0]
    k_max = args.n[-1]
    ks = np.arange(k_max + 1)
    if kind == "pole":
        exact = cf.pole_coefficients(spec.params[0], args.lam, k_max)
    elif kind == "endpoint":
        alpha = spec.params[0]
        if alpha == math.floor(alpha):
            raise GegenratesError("endpoint comparison needs a non-integer exponent")
        exact = np.array([cf.endpoint_coefficients(alpha, args.lam, int(k)) for k in ks])
    elif kind == "tpow" and spec.params[0] == 5:
        exact = np.array([cf.truncated_power5_coefficients(args.lam, int(k)) for k in ks])
    elif kind == "interior":
        s = cf.InteriorSingularity(*spec.params)
        exact = cf.interior_coefficient_table(s, args.lam, k_max)
    else:
        raise GegenratesError("closed forms exist for pole:w, endpoint:a, tpow:5 and interior:t:a")
    # extended precision: small coefficients of non-smooth f are cancellation-limited in double
    info = series_with_info(spec.fn, args.lam, k_max, quad=args.quad, extended=True)
    quad = info.series.coeffs
    diff = np.abs(exact - quad)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(exact != 0.0, diff / np.abs(exact), np.nan)
    scale = max(float(np.max(np.abs(exact))), 1e-300)
    header = {"function": spec.id, "lambda": _fmt(args.lam), "quad": info.quad_size,
              "precision": "longdouble",
              "max_abs_diff": _fmt(float(np.max(diff))),
              "max_rel_diff": _fmt(float(np.nanmax(rel)) if np.any(exact != 0.0) else math.nan),
              "max_normwise_rel_diff": _fmt(float(np.max(diff)) / scale)}
    _emit(args, "coeffs.csv", header, ("k", "closed_form", "quadrature", "abs_diff", "rel_diff"),
          ((int(k), e, q, d, r) for k, e, q, d, r in zip(ks, exact, quad, diff, rel)))
    return EXIT_OK if info.settled else EXIT_PARTIAL


def cmd_sweep(args) -> int:
    from .experiments import parse_function, run_sweep, write_sweep_csv

    spec = parse_function(args.func)
    res = run_sweep(spec, args.lam, args.n, minimax=not args.no_minimax,
                    minimax_every=args.minimax_every, grid=args.grid, quad=args.quad)
    if args.out:
        path = args.out
        if os.path.isdir(path) or path.endswith(os.sep):
            os.makedirs(path, exist_ok=True)
            path = os.path.join(path, f"sweep_{spec.id.replace(':', '_').replace('/', '-')}_lam_{args.lam:g}.csv")
        write_sweep_csv(path, res, spec)
        print(path)
    else:
        import tempfile

        with tempfile.TemporaryDirectory() as tmp:
            p = os.path.join(tmp, "sweep.csv")
            write_sweep_csv(p, res, spec)
            with open(p, encoding="utf-8") as fh:
                sys.stdout.write(fh.read())
    if res.fit is not None:
        msg = f"fit: exponent {res.fit.exponent:.4f}"
        if res.fit.geometric_base is not None:
            msg += f", geometric base {res.fit.geometric_base:.6f}"
        print(msg, file=sys.stderr)
    return EXIT_PARTIAL if res.flagged else EXIT_OK


def cmd_figure(args) -> int:
    from .experiments import run_figure

    out = args.out or f"figure{args.figure_id}"
    paths, flagged = run_figure(args.figure_id, out, grid=args.grid, quad=args.quad,
                                minimax=not args.no_minimax, minimax_every=args.minimax_every)
    for p in paths:
        print(p)
    return EXIT_PARTIAL if flagged else EXIT_OK


def cmd_critical(args) -> int:
    from .experiments import critical_points_rows, parse_function, run_critical_points

    spec = parse_function(args.func)
    if spec.id.split(":")[0] != "interior":
        raise GegenratesError("critical expects --func interior:theta:alpha")
    theta, alpha = spec.params
    tab = run_critical_points(theta, alpha, args.lam, args.n, grid=args.grid, quad=args.quad)
    header = {"function": spec.id, "lambda": _fmt(args.lam), "quad": tab.quad, "grid": args.grid}
    fits, pred = tab.fits(), tab.predicted()
    for name in ("err_left", "err_theta", "err_right", "err_max"):
        got = "n/a" if fits[name] is None else "%.4f" % fits[name].exponent
        header[f"{name}_exponent"] = f"{got} (predicted {pred[name]:.4f})"
    _emit(args, "critical.csv", header, ("n", "err_at_-1", "err_at_theta", "err_at_1", "err_max"),
          critical_points_rows(tab))
    return EXIT_OK


def cmd_diff(args) -> int:
    from .experiments import parse_function, run_spectral_diff, spectral_diff_rows

    spec = parse_function(args.func)
    tab = run_spectral_diff(spec, args.lam, args.j, args.n, grid=args.grid, slack=args.slack, rho=args.rho)
    header = {"function": spec.id, "lambda": _fmt(args.lam), "j": args.j, "rho": _fmt(tab.rho),
              "slack": _fmt(args.slack)}
    if tab.fit is not None:
        header["fit_geometric_base"] = "%.8g" % tab.fit.geometric_base
    _emit(args, "diff.csv", header, ("n", "err", "bound"), spectral_diff_rows(tab))
    bad = [n for n, e, b in zip(tab.n, tab.err, tab.bound) if np.isfinite(b) and e > b]
    return EXIT_PARTIAL if bad else EXIT_OK


def cmd_bounds(args) -> int:
    from . import bounds as bd
    from .experiments import _bound_spec, parse_function
    from .gegenbauer_core import as_lambda
    from .projection import partial_sum_errors, series_with_info

    spec = parse_function(args.func)
    if not spec.is_analytic:
        raise GegenratesError("the analytic bounds need an analytic function")
    lam = as_lambda(args.lam)
    ell = _bound_spec(spec, args.rho)
    ns = args.n
    info = series_with_info(spec.fn, lam, ns[-1], quad=args.quad)
    errs = [r.max_error for r in partial_sum_errors(spec.fn, info.series, ns, args.grid)]
    coeff_b = bd.coefficient_bound(lam, ell, np.array(ns))
    rows = []
    for n, e, cb in zip(ns, errs, coeff_b):
        try:
            eb = bd.analytic_error_bound(lam, ell, n, slack=args.slack)
        except GegenratesError:
            eb = math.nan
        rows.append((n, abs(info.series.coeffs[n]), cb, e, eb))
    header = {"function": spec.id, "lambda": _fmt(args.lam), "rho": _fmt(ell.rho), "M": _fmt(ell.M),
              "L": _fmt(ell.L), "D": _fmt(bd.D_factor(lam, ell)), "slack": _fmt(args.slack)}
    _emit(args, "bounds.csv", header, ("n", "abs_a_n", "coeff_bound", "err_proj", "error_bound"), rows)
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gegenrates", description="Gegenbauer projection and minimax experiments.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *, func=True, lam=True, n=True, n_default=None):
        if func:
            sp.add_argument("--func", required=True, help="function id[:params], e.g. f3, pole:1.5, interior:0.25:3/2")
        if lam:
            sp.add_argument("--lambda", dest="lam", type=_real, required=True, help="Gegenbauer parameter (0 = Chebyshev)")
        if n:
            sp.add_argument("--n", type=parse_degrees, required=n_default is None, default=n_default,
                            help="degrees: a..b[:step], a,b,c or a single n")
        sp.add_argument("--grid", type=int, default=10001, help="error-grid size (default 10001)")
        sp.add_argument("--quad", type=int, default=None, help="fix the quadrature size instead of doubling")
        sp.add_argument("--out", default=None, help="output file or directory (default stdout)")

    sp = sub.add_parser("project", help="projection coefficients or values")
    common(sp)
    sp.add_argument("--eval", default=None, help="comma-separated x values to evaluate S_n at")
    sp.set_defaults(handler=cmd_project)

    sp = sub.add_parser("minimax", help="best uniform approximation by Remez")
    common(sp, lam=False)
    sp.set_defaults(handler=cmd_minimax)

    sp = sub.add_parser("coeffs", help="closed-form versus quadrature coefficients")
    common(sp)
    sp.set_defaults(handler=cmd_coeffs)

    sp = sub.add_parser("sweep", help="degree sweep with errors, indicator and rate fit")
    common(sp)
    sp.add_argument("--no-minimax", action="store_true", help="skip the Remez baseline")
    sp.add_argument("--minimax-every", type=int, default=1, help="run Remez on every k-th degree only")
    sp.set_defaults(handler=cmd_sweep)

    sp = sub.add_parser("figure", help="regenerate the data behind one figure")
    sp.add_argument("figure_id", type=int, choices=range(1, 9), metavar="{1..8}")
    common(sp, func=False, lam=False, n=False)
    sp.add_argument("--no-minimax", action="store_true", help="skip the Remez baseline")
    sp.add_argument("--minimax-every", type=int, default=4, help="Remez on every k-th degree (default 4)")
    sp.set_defaults(handler=cmd_figure)

    sp = sub.add_parser("critical", help="errors at x = -1, theta, 1 for |x - theta|^alpha")
    common(sp)
    sp.set_defaults(handler=cmd_critical)

    sp = sub.add_parser("diff", help="spectral differentiation errors against the bound")
    common(sp)
    sp.add_argument("--j", type=int, default=1, help="derivative order")
    sp.add_argument("--slack", type=float, default=1.05)
    sp.add_argument("--rho", type=float, default=None, help="ellipse parameter (default: just inside the largest)")
    sp.set_defaults(handler=cmd_diff)

    sp = sub.add_parser("bounds", help="coefficient and error bounds for an analytic function")
    common(sp)
    sp.add_argument("--slack", type=float, default=1.05)
    sp.add_argument("--rho", type=float, default=None, help="ellipse parameter (default: just inside the largest)")
    sp.set_defaults(handler=cmd_bounds)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (GegenratesError, ValueError) as exc:
        print(f"gegenrates: error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
