"""Run the acceptance criteria and write a JSON summary.

Usage: python3 scripts/run_acceptance.py [--only 3,4] [--out acceptance.json]
"""

from __future__ import annotations

import argparse
import json

from conewalk.acceptance import CRITERIA, run_criterion


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", default="", help="comma-separated criterion numbers")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    ks = [int(k) for k in args.only.split(",") if k] or sorted(CRITERIA)
    results = []
    for k in ks:
        r = run_criterion(k)
        print(r.line(), flush=True)
        results.append({"number": r.number, "title": r.title, "pass": r.ok, "seconds": r.seconds, "detail": r.detail})
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(results, fh, indent=2, default=str)
    return 0 if all(r["pass"] for r in results) else 1


if __name__ == "__main__":
    raise SystemExit(main())
