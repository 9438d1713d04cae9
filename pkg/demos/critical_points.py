"""Where does the error of a projection live?

For f(x) = |x - 1/4|^(3/2) the error of S_n f near x = 1/4 shrinks like
n^(-3/2) whatever lambda is, while the error at the endpoints behaves like
n^(lambda - 5/2). For lambda < 1 the interior singularity dominates; beyond
lambda = 1 the endpoints take over. The script prints envelope slopes at the
three critical points for two lambdas, then writes the pointwise data behind
a three-panel plot to ./critical_points_out.
"""

import os

from gegenrates.experiments import run_critical_points, run_figure


def main():
    for lam in (-0.4, 2.0):
        tab = run_critical_points(0.25, 1.5, lam, range(20, 201))
        fits, pred = tab.fits(), tab.predicted()
        print(f"lambda = {lam}")
        for name, where in (("err_left", "x = -1"), ("err_theta", "x = 1/4"), ("err_right", "x = 1")):
            print(f"   {where:<8} slope {fits[name].exponent:7.3f}   predicted {pred[name]:6.2f}")
        print(f"   largest error at n = 200: {tab.err_max[-1]:.3e}\n")
    out = os.path.join(os.getcwd(), "critical_points_out")
    paths, _ = run_figure(7, out)
    print("pointwise curves written to:")
    for p in paths:
        print("  ", p)


if __name__ == "__main__":
    main()
