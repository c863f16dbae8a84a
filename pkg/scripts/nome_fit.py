"""Fit the low-order t-expansion of the simple-walk nome (kernelnum nome_gamma) from sampled t.

Usage: python3 scripts/nome_fit.py [--samples 8] [--dps 50]
"""

from __future__ import annotations

import argparse
from fractions import Fraction

import mpmath as mp

from conewalk.acceptance import NOME_SERIES, fit_nome_series


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=8)
    ap.add_argument("--dps", type=int, default=50)
    args = ap.parse_args()
    for den in (100, 1000):
        ts = [Fraction(k, den) for k in range(1, args.samples + 1)]
        c = fit_nome_series(ts, args.dps)
        with mp.workdps(args.dps):
            errs = [mp.nstr(abs(c[k] - NOME_SERIES[k]), 3) for k in range(len(NOME_SERIES))]
        print(f"t = k/{den}: coefficients of t^(2k+1) = {[mp.nstr(x, 12) for x in c[:6]]}")
        print(f"  |fit - {list(NOME_SERIES)}| = {errs}")


if __name__ == "__main__":
    main()
