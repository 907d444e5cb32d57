#!/usr/bin/env python3
"""Convergence of normalized exponential sums toward the closed-form
amplitude, at a few wave numbers, across patch radii.

Usage: python scripts/weyl_convergence.py [--alpha A] [--beta B]
"""

import argparse

from quasilattice import (
    AffineDeformation,
    AlgebraicNumber,
    amplitude_closed,
    deform_patch,
    project_patch,
    weyl_sum,
)

K_VALUES = [AlgebraicNumber(1, 0, 2), AlgebraicNumber(0, 1, 4), AlgebraicNumber(2, 1, 4)]
RADII = [100.0, 300.0, 1000.0, 3000.0, 10000.0]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--alpha", type=float, default=0.0)
    ap.add_argument("--beta", type=float, default=0.0)
    args = ap.parse_args()
    theta = AffineDeformation(args.alpha, args.beta)
    header = "radius".rjust(8) + "".join(f"  |err| k={k.value():+.4f}" for k in K_VALUES)
    print(header)
    for r in RADII:
        patch = project_patch(r)
        comb = deform_patch(patch, theta)
        row = f"{r:8.0f}"
        for k in K_VALUES:
            err = abs(weyl_sum(comb, k) - amplitude_closed(k, args.alpha, args.beta))
            row += f"  {err:14.3e}"
        print(row)


if __name__ == "__main__":
    main()
