"""Write CSV tables of E_k(x, y) and E_k(-ix, y) for plotting.

    python scripts/kernel_tables.py --out tables/
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from dunklkit.core import dunkl_kernel, dunkl_kernel_osc


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="tables")
    parser.add_argument("--ks", default="0,0.5,1,2.5")
    parser.add_argument("--y", type=float, default=1.0)
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    xs = np.linspace(-10, 10, 401)
    for k in (float(v) for v in args.ks.split(",")):
        real = dunkl_kernel(k, xs, args.y)
        osc = dunkl_kernel_osc(k, xs, args.y)
        path = out / f"kernel_k{k:g}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\r\n")
            writer.writerow(["x", "kernel", "osc_re", "osc_im"])
            for row in zip(xs, real, osc.real, osc.imag):
                writer.writerow([repr(float(v)) for v in row])
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
