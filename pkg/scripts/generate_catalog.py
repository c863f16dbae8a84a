"""Regenerate the bundled catalogs under src/conewalk/data/.

Usage: python3 scripts/generate_catalog.py [--check]
"""

from __future__ import annotations

import argparse
from pathlib import Path

from conewalk.stepset import StepSet, format_stepset, is_nonsingular

DATA = Path(__file__).resolve().parents[1] / "src" / "conewalk" / "data"

# id, 8-bit step code (SW,S,SE,W,E,NW,N,NE), expected nature on the three-quadrant cone
TABLE1 = [
    (1, "01011010", "DF"),
    (2, "10100101", "DF"),
    (3, "11111111", "DF"),
    (4, "01010001", "alg"),
    (5, "10001010", "alg"),
    (6, "11011011", "alg"),
    (7, "01011011", "D-alg"),
    (8, "11010001", "D-trans"),
    (9, "10001011", "D-trans"),
    (10, "11011010", "D-trans"),
    (11, "11000011", "-"),
    (12, "01100110", "-"),
    (13, "01001100", "-"),
    (14, "01111110", "-"),
]


def nonsingular_representatives() -> list[StepSet]:
    reps = []
    for mask in range(1, 256):
        code = format(mask, "08b")
        s = StepSet.from_code(code)
        if not is_nonsingular(s):
            continue
        mirror = s.mirror().code()
        if code <= mirror:
            reps.append(s)
    return reps


def table1_text() -> str:
    lines = ["# id, steps, expected nature, source"]
    for mid, code, nature in TABLE1:
        lines.append(f"{mid}, {format_stepset(StepSet.from_code(code), ';')}, {nature}, code {code}")
    return "\n".join(lines) + "\n"


def nonsingular_text() -> str:
    lines = ["# id, steps, expected nature, source"]
    for mid, s in enumerate(nonsingular_representatives(), start=1):
        lines.append(f"{mid}, {format_stepset(s, ';')}, -, generated code {s.code()}")
    return "\n".join(lines) + "\n"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check", action="store_true", help="fail if the files on disk differ")
    args = ap.parse_args()
    files = {"table1.csv": table1_text(), "nonsingular.csv": nonsingular_text()}
    for name, text in files.items():
        path = DATA / name
        if args.check:
            if path.read_text() != text:
                print(f"{name} is stale")
                return 1
        else:
            path.write_text(text)
    print(f"{len(nonsingular_representatives())} nonsingular models modulo x<->y")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
