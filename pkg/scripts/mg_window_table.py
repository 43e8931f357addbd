#!/usr/bin/env python3
"""Print the certified window for the minimal growth constant mg(d).

The lower edge is the effective constant (astronomically small, shown in
tower notation); the upper edge is the best built-in witness: the free
abelian limit 2^d/d! or an affine Coxeter group beating it.
"""

import argparse
from fractions import Fraction

from growthlab import coxeter, tower


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-degree", type=int, default=8)
    ap.add_argument("--structure-constant", type=int, default=100)
    args = ap.parse_args()
    for d in range(1, args.max_degree + 1):
        win = coxeter.mg_window(d, args.structure_constant)
        lower = tower.format_tower(win.lower, 8) if win.lower is not None else "undecided"
        zd = Fraction(2**d)
        for k in range(2, d + 1):
            zd /= k
        print(f"mg({d}): lower {lower}")
        print(f"        upper {win.upper} = {float(win.upper):.6f} from {win.upper_witness}"
              f"   (free abelian gives {float(zd):.6f})")


if __name__ == "__main__":
    main()
