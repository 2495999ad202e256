#!/usr/bin/env python3
"""Dump the stratification duality table of a shipped function.

Prints one row per stratum: active pattern, dimension, lifted dimension of
its orbit, and the dimension of its dual stratum under the duality map.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from spectralift import corpus
from spectralift.lift import SpectralFn, lift_stratification
from spectralift.polyfun import conjugate_stratification, stratify

MAKERS = {
    "ell1": corpus.ell1,
    "fmax": corpus.f_max,
    "neg_orthant": corpus.neg_orthant_indicator,
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("function", choices=sorted(MAKERS))
    ap.add_argument("n", type=int)
    args = ap.parse_args()

    f = MAKERS[args.function](args.n)
    strat = stratify(f)
    dual = conjugate_stratification(f, strat)
    lifted = lift_stratification(SpectralFn(f), strat)
    lifted_dim = {}
    for ls in lifted.lifted:
        for i in ls.orbit:
            lifted_dim[i] = ls.dim_lifted

    print(f"{args.function} on R^{args.n}: {len(strat.strata)} strata, "
          f"{len(strat.sym_orbits)} orbits")
    print(f"{'stratum':>8} {'dim':>4} {'lifted':>7} {'dual dim':>9}  "
          f"representative")
    for i, s in enumerate(strat.strata):
        rep = "(" + ", ".join(str(v) for v in s.representative) + ")"
        print(f"{i:>8} {s.dim:>4} {lifted_dim[i]:>7} "
              f"{dual.dual_strata[i].dim():>9}  {rep}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
