"""Compare the contour value of F(t) with and without the extra 1/t against the enumerated series.

Usage: python3 scripts/t_factor.py [--steps N,S,E,W] [--N 40]
"""

from __future__ import annotations

import argparse
from fractions import Fraction

from conewalk.contour import ContourIntegrator, default_spec, f_series_value
from conewalk.elliptic import build_context
from conewalk.kernelnum import kernel_numerics
from conewalk.stepset import parse_stepset


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", default="N,S,E,W")
    ap.add_argument("--N", type=int, default=40)
    args = ap.parse_args()
    s = parse_stepset(args.steps)
    print(f"{'t':>6} {'series':>22} {'no 1/t':>22} {'with 1/t':>22}")
    for t in (Fraction(1, 20), Fraction(1, 10), Fraction(1, 6)):
        ctx = build_context(kernel_numerics(s, t))
        series, tail = f_series_value(ctx, 1, 1, args.N)
        row = []
        for tf in (False, True):
            spec = default_spec(ctx, t_factor=tf)
            row.append(ContourIntegrator(ctx, 1, 1, spec).F().value.real)
        print(f"{str(t):>6} {series:22.15e} {row[0]:22.15e} {row[1]:22.15e}  tail<{tail:.1e}")


if __name__ == "__main__":
    main()
