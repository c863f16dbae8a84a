"""Classify a bundled catalog on the three-quadrant cone and print the table with verdict counts.

Usage: python3 scripts/classify_catalog.py [--name table1|nonsingular] [--start 1,1] [--bound 12]
"""

from __future__ import annotations

import argparse
from collections import Counter

from conewalk.classify import ClassifyConfig, classify_catalog
from conewalk.enumerate import ConeSpec
from conewalk.stepset import load_catalog


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--name", default="table1")
    ap.add_argument("--start", default="1,1")
    ap.add_argument("--bound", type=int, default=12)
    args = ap.parse_args()
    p, q = (int(v) for v in args.start.split(","))
    res = classify_catalog(load_catalog(name=args.name), ConeSpec.three_quadrant((p, q)), ClassifyConfig(decoupling_bound=args.bound))
    print(res.table())
    print()
    for label, n in sorted(Counter(r.got.label for r in res.rows).items()):
        print(f"{n:>3}  {label}")
    print(f"mismatches: {[r.model_id for r in res.mismatches]}")


if __name__ == "__main__":
    main()
