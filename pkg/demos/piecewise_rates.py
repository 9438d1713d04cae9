"""Algebraic convergence for functions with a kink.

A function that is C^(m-1) with a jump in its m-th derivative loses
smoothness-limited accuracy. Its Gegenbauer projection converges like n^(-m)
as long as lambda <= 1, and like n^(lambda - m - 1) for larger lambda, so heavy
weights near the endpoints cost accuracy. The table compares fitted slopes
over n = 16..250 with those predictions.

    python demos/piecewise_rates.py
"""

from gegenrates.bounds import piecewise_rate_exponent
from gegenrates.experiments import parse_function, run_sweep


def main():
    degrees = range(16, 251)
    print(f"{'function':<22}{'lambda':>7}{'fitted':>9}{'predicted':>11}")
    for fid in ("f4", "f5", "f6"):
        spec = parse_function(fid)
        for lam in (0.5, 1.0, 1.5, 3.0):
            res = run_sweep(spec, lam, degrees, minimax=False)
            want = piecewise_rate_exponent(lam, spec.smoothness_m)
            print(f"{spec.label:<22}{lam:7.2f}{res.fit.exponent:9.3f}{want:11.2f}")
    print("\n|sin 4x|^5 is the slowest to settle: at lambda = 1/2 its fitted slope over"
          "\nn = 16..250 is still steeper than the asymptotic prediction.")


if __name__ == "__main__":
    main()
