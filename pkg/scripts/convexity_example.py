"""Convexity criterion on phi with transform (1 + |y|)^(-4), k = 0.

Runs the check with the weight exponent 2k + 1 and with 2k, and prints
the hypothesis status, min W_k phi and the CM verdicts for phi(sqrt|x|).

    python scripts/convexity_example.py
"""

import numpy as np

from dunklkit.grammar import parse_spec
from dunklkit.monotonicity import check_convexity_theorem


def main():
    phi = parse_spec("inverse-algebraic(power=4)")
    ys = np.linspace(0, 60, 601)
    for exponent in (None, 0.0):
        rep = check_convexity_theorem(0.0, phi, ys, exponent=exponent, x_grid=np.linspace(0, 3, 13))
        print(f"exponent {rep.exponent}: convex={rep.convex} decays={rep.decays} status={rep.status}")
        if rep.w_min is not None:
            print(f"  min W phi = {rep.w_min:.6f}")
            full, half = rep.conclusion_cm, rep.conclusion_cm_positive_half
            print(f"  CM of phi(sqrt|x|): full interval {full.verdict} {full.first_violation}; x > 0 {half.verdict}")


if __name__ == "__main__":
    main()
