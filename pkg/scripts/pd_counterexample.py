"""Gram spectra of phi_t(x) = E_k(-t^2 x^2) for several k and t.

For k = 0 this is a Gaussian and every Gram matrix is positive definite.
For k > 0 the function grows like e^{t^2 x^2} and the script prints
configurations with negative eigenvalues, checked against an mpmath oracle.

    python scripts/pd_counterexample.py
"""

import mpmath as mp
import numpy as np

from dunklkit.core import KernelDecaying, SquaredArgument, dunkl_kernel
from dunklkit.monotonicity import check_dunkl_pd

POINTS = [-1.3, 0.2, 0.9, 2.0]


def mp_gram(k, t, pts):
    c = mp.gamma(k + 0.5) / (mp.gamma(0.5) * mp.gamma(k))

    def phi(r2):
        return mp.mpf(dunkl_kernel(k, -(t * t) * float(r2), 1.0))

    def entry(y, x):
        return c * mp.quad(lambda s: phi(x * x + y * y - 2 * x * y * s) * (1 - s) ** (k - 1) * (1 + s) ** k, [-1, 1])

    return np.array([[float(entry(y, x)) for x in pts] for y in pts])


def main():
    print(f"points {POINTS}")
    print(f"{'k':>4} {'t':>4} {'min eig':>14} {'max diag':>12} {'ratio':>11}  verdict")
    for k in (0.0, 0.5, 1.0, 2.0):
        for t in (0.5, 1.0, 2.0):
            rep = check_dunkl_pd(k, SquaredArgument(KernelDecaying(t * t)), POINTS)
            ratio = rep.min_eigenvalue / rep.max_diagonal
            print(f"{k:4.1f} {t:4.1f} {rep.min_eigenvalue:14.6e} {rep.max_diagonal:12.4e} {ratio:11.3e}  {rep.verdict}")
    oracle = mp_gram(1.0, 1.0, POINTS)
    print("mpmath oracle, k=1, t=1: eigenvalues", np.linalg.eigvalsh(oracle))


if __name__ == "__main__":
    main()
