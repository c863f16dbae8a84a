"""ASCII chart of the regions Omega_j (mod 4) over one real period of the uniformization.

Usage: python3 scripts/region_chart.py [--steps N,S,E,W] [--t 1/10] [--periods 1.5] [--csv grid.csv]
"""

from __future__ import annotations

import argparse
from fractions import Fraction

import numpy as np

from conewalk.elliptic import build_context
from conewalk.kernelnum import kernel_numerics
from conewalk.stepset import parse_stepset


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", default="N,S,E,W")
    ap.add_argument("--t", default="1/10")
    ap.add_argument("--periods", type=float, default=1.5)
    ap.add_argument("--width", type=int, default=64)
    ap.add_argument("--height", type=int, default=40)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()
    ctx = build_context(kernel_numerics(parse_stepset(args.steps), Fraction(args.t)))
    h = ctx.pitau.imag * args.periods
    re = np.linspace(0, np.pi, args.width, endpoint=False)
    im = np.linspace(h / 2, -h / 2, args.height)
    cls = ctx.region_class(re[None, :] + 1j * im[:, None])
    glyph = np.array(list("0123"))
    print(f"Im(pi tau) = {ctx.pitau.imag:.6f}, Im(gamma) = {ctx.gamma.imag:.6f}; rows top to bottom, Re z in [0, pi)")
    for y, row in zip(im, cls):
        print(f"{y:+9.4f} {''.join(glyph[row])}")
    if args.csv:
        ctx.dump_grid(args.csv, periods=args.periods)


if __name__ == "__main__":
    main()
