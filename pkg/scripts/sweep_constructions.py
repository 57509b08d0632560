"""Sweep the construction grid and tabulate analytic reports.

For every (r, l, n) cell: build the two-part family, evaluate the exact
Hausdorff dimension, inductive dimension, and Lebesgue measure, and print
one row.  Infeasible cells (fractional dimension with positive volume)
print DNE instead of a report.

    python3 scripts/sweep_constructions.py [--seed 17] [--fit]

--fit additionally runs a natural-scale box fit on each thin (l=0)
output, which takes a few extra seconds per row.
"""

import argparse
import math
import sys
from fractions import Fraction

from fractalforge.boxdim import box_dim_fit
from fractalforge.build import ConstructionRequest, thm34
from fractalforge.calculus import is_fractal
from fractalforge.errors import Infeasible
from fractalforge.scalars import fmt_exact, to_float

R_GRID = [Fraction(1, 3), Fraction(1, 2), Fraction(3, 4), Fraction(1), Fraction(3, 2), Fraction(2)]
L_GRID = [Fraction(0), Fraction(1, 2), Fraction(3, 2)]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=17, help="prune seed for every cell")
    ap.add_argument("--fit", action="store_true", help="box-fit each thin output")
    args = ap.parse_args(argv)

    header = f"{'r':>4} {'l':>4} {'n':>2}  {'dim':>14} {'~dim':>8} {'measure':>8} {'ind':>3} {'fractal':>7}"
    if args.fit:
        header += f" {'fit slope':>10}"
    print(header)
    print("-" * len(header))

    for r in R_GRID:
        for l in L_GRID:
            for n in (math.ceil(r), math.ceil(r) + 1):
                row = f"{str(r):>4} {str(l):>4} {n:>2}  "
                try:
                    expr = thm34(ConstructionRequest(r=r, l=l, n=n, prune_seed=args.seed))
                except Infeasible:
                    print(row + f"{'DNE':>14}")
                    continue
                rep = is_fractal(expr)
                row += (
                    f"{fmt_exact(rep.hausdorff_dim):>14} "
                    f"{to_float(rep.hausdorff_dim):>8.4f} "
                    f"{fmt_exact(rep.lebesgue_measure):>8} "
                    f"{rep.inductive_dim:>3} "
                    f"{str(rep.is_fractal).lower():>7}"
                )
                if args.fit and l == 0:
                    fit = box_dim_fit(expr, range(1, 4), truncation=2)
                    row += f" {fit.slope:>10.4f}"
                print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
