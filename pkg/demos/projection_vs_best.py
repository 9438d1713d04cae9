"""How far is the Gegenbauer projection from the best polynomial?

For an analytic function both S_n f and the minimax polynomial B_n f converge
geometrically at the same rate, so their error ratio R(n) can only grow like a
power of n. This script prints R(n) for f(x) = 1/(1 + 9x^2) at a negative, a
Legendre and a large lambda, then the scaled ratio n^(-lambda) R(n) that
stays flat when lambda > 0.

    python demos/projection_vs_best.py
"""

import numpy as np

from gegenrates.experiments import parse_function, run_sweep


def main():
    spec = parse_function("f3")
    degrees = list(range(8, 73, 8))
    print(f"f(x) = {spec.label}, Bernstein parameter rho = {spec.rho:.6f}\n")
    print("   n" + "".join(f"   R(lam={lam:>4})" for lam in (-0.4, 0.5, 2.0)))
    sweeps = {lam: run_sweep(spec, lam, degrees) for lam in (-0.4, 0.5, 2.0)}
    for i, n in enumerate(degrees):
        print(f"{n:4d}" + "".join(f"{sweeps[lam].rows[i].R:15.4f}" for lam in sweeps))
    print("\nscaled ratio n^(-lambda) R(n) for lambda = 2 (flat means R grows like n^lambda):")
    res = sweeps[2.0]
    print("  " + "  ".join(f"{v:.4f}" for v in res.column("scaled_R")))
    print(f"\nprojection error at n = {degrees[-1]}: {res.rows[-1].err_proj:.3e}, "
          f"best error: {res.rows[-1].err_minimax:.3e}")
    fit = res.fit
    print(f"fitted decay: rho ~ {fit.geometric_base:.5f} with polynomial factor n^{fit.exponent:.2f}")
    assert np.all(res.column("R") >= 1 - 1e-6)


if __name__ == "__main__":
    main()
