"""Explicit Gegenbauer coefficients against quadrature.

Several model functions have coefficients in closed form: a simple pole
1/(x - omega), the endpoint power (1 + x)^alpha, the truncated power (x)_+^5
and the interior power |x - theta|^alpha. This script checks each against the
projection computed by Gauss quadrature in extended precision and prints the
worst relative disagreement.
"""

import numpy as np

from gegenrates import closed_forms as cf
from gegenrates.experiments import parse_function
from gegenrates.projection import compute_series


def report(name, exact, approx):
    nz = exact != 0
    rel = np.max(np.abs(approx - exact)[nz] / np.abs(exact[nz]))
    print(f"{name:<34} k <= {len(exact) - 1:3d}   worst relative difference {rel:.2e}")


def main():
    lam = 0.75
    k = np.arange(51)
    s = compute_series(parse_function("endpoint:3/2").fn, lam, 50, extended=True)
    report("(1+x)^(3/2), lambda = 3/4", np.array([cf.endpoint_coefficients(1.5, lam, j) for j in k]), s.coeffs)

    s = compute_series(parse_function("tpow:5").fn, 2.0, 60, extended=True)
    report("(x)_+^5, lambda = 2", np.array([cf.truncated_power5_coefficients(2.0, j) for j in range(61)]), s.coeffs)

    s = compute_series(parse_function("interior:1/4:3/2").fn, lam, 40, extended=True)
    report("|x - 1/4|^(3/2), lambda = 3/4",
           cf.interior_coefficient_table(cf.InteriorSingularity(0.25, 1.5), lam, 40), s.coeffs)

    # pole coefficients decay like rho^-k, so compare the leading ones only
    s = compute_series(parse_function("pole:1.5").fn, 1.0, 20, extended=True)
    report("1/(x - 3/2), lambda = 1", cf.pole_coefficients(1.5, 1.0, 20), s.coeffs)

    print("\nthe pole coefficients share one sign and shrink geometrically:")
    a = cf.pole_coefficients(1.5, 1.0, 8)
    print("  " + "  ".join(f"{v:+.4e}" for v in a))


if __name__ == "__main__":
    main()
