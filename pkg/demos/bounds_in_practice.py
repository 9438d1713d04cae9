"""Explicit error bounds next to measured errors.

For f(x) = 1/(x - 3/2) the closed Bernstein ellipse through the pole has
rho = 3/2 + sqrt(5)/2. The bounds are evaluated on a slightly smaller ellipse,
where f is bounded, and compared with the coefficients and errors actually
observed. The measured values stay below the bounds and decay at the same
geometric rate, so the bounds are pessimistic only by a roughly constant factor.
"""

import numpy as np

from gegenrates.bounds import analytic_error_bound, coefficient_bound, ellipse_max_modulus, ellipse_spec
from gegenrates.closed_forms import pole_coefficients
from gegenrates.experiments import parse_function
from gegenrates.projection import compute_series, partial_sum_errors


def main():
    spec = parse_function("pole:1.5")
    rho = spec.rho * (1 - 1e-3)
    ell = ellipse_spec(rho, ellipse_max_modulus(spec.complex_fn, rho))
    print(f"rho = {rho:.6f}, max |f| on the ellipse = {ell.M:.1f}, perimeter = {ell.L:.4f}\n")
    degrees = [2, 5, 10, 15, 20, 25, 30]
    for lam in (0.5, 2.0):
        a = pole_coefficients(1.5, lam, max(degrees))
        s = compute_series(spec.fn, lam, max(degrees))
        errs = [r.max_error for r in partial_sum_errors(spec.fn, s, degrees)]
        print(f"lambda = {lam}")
        print(f"{'n':>5}{'|a_n|':>12}{'bound':>12}{'error':>12}{'bound':>12}")
        for n, e in zip(degrees, errs):
            print(f"{n:5d}{abs(a[n]):12.3e}{coefficient_bound(lam, ell, n):12.3e}"
                  f"{e:12.3e}{analytic_error_bound(lam, ell, n):12.3e}")
        ratio = np.array(errs) / np.array([analytic_error_bound(lam, ell, n) for n in degrees])
        print(f"error / bound ranges over [{ratio.min():.1e}, {ratio.max():.1e}]\n")


if __name__ == "__main__":
    main()
