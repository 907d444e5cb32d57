#!/usr/bin/env python3
"""Observed shrinkage of the internal-coordinate estimator.

The interval returned by sigma_estimate on a radius-r patch always
contains the internal coordinate; its width is set by how close the
patch's conjugates get to the window edges, a Diophantine quantity.  At
r = 1000 the width is exactly 577*sqrt2 - 816 ~ 1.23e-3; the next
improvement arrives near r ~ 1970 (the following convergent of 1/sqrt2).
"""

import argparse

from quasilattice import AlgebraicNumber, project_patch, sigma_estimate, silver_window


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--shift", default="1,1", help="'m,n' meaning m + n*sqrt2")
    args = ap.parse_args()
    m, n = (int(v) for v in args.shift.split(","))
    shift = AlgebraicNumber(m, n, 1)
    window = silver_window()
    print(f"shift = {shift}  (internal coordinate {shift.star().value():+.9f})")
    print(f"{'radius':>8}  {'points':>7}  {'width':>12}  interval")
    for r in (10.0, 30.0, 100.0, 300.0, 1000.0, 2000.0, 3000.0):
        base = project_patch(r + abs(shift.value()) + 2.0)
        patch = base.translate(-shift).trim(r)
        region = sigma_estimate(patch, window)
        lo, hi = region.bounds()
        width = (hi - lo).value()
        print(
            f"{r:8.0f}  {len(patch):7d}  {width:12.3e}  "
            f"[{lo.value():+.9f}, {hi.value():+.9f}]"
        )


if __name__ == "__main__":
    main()
