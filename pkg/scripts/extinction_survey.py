#!/usr/bin/env python3
"""Survey systematic extinctions over a family of exact slopes.

Rational slopes and slopes of the form 1 + r*sqrt2 produce exact zeros of
the amplitude on sublattices of the dual module; this script tabulates
how many land inside |k| <= k_max and what the surviving support spans.
"""

import argparse
from fractions import Fraction

from quasilattice import QuadRational, extinction_report

FAMILY = [
    QuadRational(Fraction(0), Fraction(0)),
    QuadRational(Fraction(1), Fraction(0)),
    QuadRational(Fraction(2), Fraction(0)),
    QuadRational(Fraction(1, 2), Fraction(0)),
    QuadRational(Fraction(1, 3), Fraction(0)),
    QuadRational(Fraction(1), Fraction(1)),       # 1 + sqrt2
    QuadRational(Fraction(1), Fraction(1, 2)),    # 1 + sqrt2/2
    QuadRational(Fraction(3), Fraction(-2)),      # 3 - 2*sqrt2, ratio 2
]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--kmax", type=float, default=4.0)
    args = ap.parse_args()
    print(f"{'alpha':>16}  {'extinct':>8}  {'survive':>8}  span")
    for alpha in FAMILY:
        rep = extinction_report(alpha, args.kmax)
        print(
            f"{str(alpha):>16}  {len(rep.extinctions):8d}  "
            f"{len(rep.survivors):8d}  {rep.span}"
        )


if __name__ == "__main__":
    main()
