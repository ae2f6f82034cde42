"""Compare the two Kummer closed forms with the quadrature oracle.

Prints, for each closed form, the worst relative error against every
(measure power, kernel sign) combination, then the CM verdicts of the
matched function.

    python scripts/adjudicate_kummer_forms.py [--json out.json]
"""

import argparse
import json

import numpy as np

from dunklkit.kummer import adjudicate_theorem6


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--ks", default="0,0.5,1,2.3")
    parser.add_argument("--ps", default="0.25,1,4")
    parser.add_argument("--points", type=int, default=25)
    parser.add_argument("--json", help="write the full report here")
    args = parser.parse_args()

    ks = [float(v) for v in args.ks.split(",")]
    ps = [float(v) for v in args.ps.split(",")]
    rep = adjudicate_theorem6(ks, ps, np.linspace(-3, 3, args.points))
    for rec in rep.records:
        print(rec.closed_form)
        for combo, err in rec.max_rel_error.items():
            mark = "  <- match" if err <= 1e-7 else ""
            print(f"  {combo:18s} {err:10.3e}{mark}")
    print(f"CM verdicts (N=8): {rep.cm_verdicts}")
    if rep.erfc_max_error is not None:
        print(f"k=0 erfc identity gap: {rep.erfc_max_error:.3e}")
    print(f"unique match per form: {rep.unique_matches}; passed: {rep.passed}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rep.to_dict(), fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
