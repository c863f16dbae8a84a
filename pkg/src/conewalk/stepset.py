"""Weighted small-step sets, their step polynomials, and the model catalog."""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

Vec = tuple[int, int]

NAMES: dict[str, Vec] = {
    "NE": (1, 1),
    "N": (0, 1),
    "NW": (-1, 1),
    "W": (-1, 0),
    "SW": (-1, -1),
    "S": (0, -1),
    "SE": (1, -1),
    "E": (1, 0),
}
DIRECTIONS: tuple[Vec, ...] = tuple(NAMES.values())
_NAME_OF = {v: k for k, v in NAMES.items()}

# Bit order of the 8-character step codes used for the reference catalog: rows from y=-1
# upwards, x increasing inside a row.
CODE_ORDER: tuple[Vec, ...] = ((-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1))


class StepSetError(ValueError):
    pass


class UnknownDirection(StepSetError):
    pass


class DuplicateDirection(StepSetError):
    pass


class BadWeight(StepSetError):
    pass


class EmptyStepSet(StepSetError):
    pass


class CatalogError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class StepSet:
    """Positive rational weights on a subset of the eight small steps."""

    weights: tuple[tuple[Vec, Fraction], ...]

    def __post_init__(self) -> None:
        if not self.weights:
            raise EmptyStepSet("step set is empty")
        seen = set()
        for v, w in self.weights:
            if v not in DIRECTIONS:
                raise UnknownDirection(f"not a small step: {v}")
            if v in seen:
                raise DuplicateDirection(f"direction {v} given twice")
            if w <= 0:
                raise BadWeight(f"weight of {v} must be positive, got {w}")
            seen.add(v)
        ordered = tuple(sorted(self.weights, key=lambda vw: DIRECTIONS.index(vw[0])))
        object.__setattr__(self, "weights", ordered)

    @classmethod
    def from_mapping(cls, m: Mapping[Vec, Fraction | int | str]) -> StepSet:
        return cls(tuple((tuple(v), Fraction(w)) for v, w in m.items()))  # type: ignore[misc]

    @classmethod
    def from_code(cls, code: str) -> StepSet:
        if len(code) != 8 or set(code) - {"0", "1"}:
            raise StepSetError(f"bad step code {code!r}")
        return cls(tuple((v, Fraction(1)) for v, c in zip(CODE_ORDER, code) if c == "1"))

    @property
    def steps(self) -> tuple[Vec, ...]:
        return tuple(v for v, _ in self.weights)

    def weight(self, v: Vec) -> Fraction:
        return dict(self.weights).get(v, Fraction(0))

    def as_dict(self) -> dict[Vec, Fraction]:
        return dict(self.weights)

    def total_weight(self) -> Fraction:
        return sum((w for _, w in self.weights), Fraction(0))

    def is_unweighted(self) -> bool:
        return all(w == 1 for _, w in self.weights)

    def transform(self, matrix: tuple[int, int, int, int]) -> StepSet:
        a, b, c, d = matrix
        return StepSet(tuple(((a * i + b * j, c * i + d * j), w) for (i, j), w in self.weights))

    def mirror(self) -> StepSet:
        """Swap the roles of x and y."""
        return self.transform((0, 1, 1, 0))

    def code(self) -> str:
        s = set(self.steps)
        return "".join("1" if v in s else "0" for v in CODE_ORDER)

    def __str__(self) -> str:
        return format_stepset(self)


def _split_tokens(spec: str) -> list[str]:
    tokens, depth, cur = [], 0, []
    for ch in spec:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in ",;" and depth == 0:
            tokens.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    tokens.append("".join(cur))
    return [t.strip() for t in tokens if t.strip()]


_PAIR = re.compile(r"^\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")


def _direction(token: str) -> Vec:
    name = token.strip().upper()
    if name in NAMES:
        return NAMES[name]
    m = _PAIR.match(token.strip())
    if m:
        v = (int(m.group(1)), int(m.group(2)))
        if v in DIRECTIONS:
            return v
    raise UnknownDirection(f"unknown direction {token!r}")


def parse_stepset(spec: str) -> StepSet:
    """Parse ``"N,S,E:1/2,(1,-1):3"``; commas or semicolons separate steps."""
    items: list[tuple[Vec, Fraction]] = []
    for tok in _split_tokens(spec):
        if ":" in tok:
            d, w = tok.rsplit(":", 1)
            try:
                weight = Fraction(w.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise BadWeight(f"bad weight {w!r}") from exc
        else:
            d, weight = tok, Fraction(1)
        v = _direction(d)
        if any(v == u for u, _ in items):
            raise DuplicateDirection(f"direction {d.strip()} given twice")
        if weight <= 0:
            raise BadWeight(f"weight of {d.strip()} must be positive")
        items.append((v, weight))
    if not items:
        raise EmptyStepSet("empty step list")
    return StepSet(tuple(items))


def format_stepset(s: StepSet, sep: str = ",") -> str:
    out = []
    for v, w in s.weights:
        out.append(_NAME_OF[v] if w == 1 else f"{_NAME_OF[v]}:{w}")
    return sep.join(out)


def is_nonsingular(s: StepSet) -> bool:
    """True iff every line through the origin has a step strictly on each side.

    If the steps fit in a closed half-plane, rotating its normal until the
    boundary meets a step gives a normal orthogonal to some step, so those
    normals are the only ones to test.
    """
    steps = s.steps
    for a, b in steps:
        for n in ((-b, a), (b, -a)):
            dots = [n[0] * i + n[1] * j for i, j in steps]
            if not (any(d > 0 for d in dots) and any(d < 0 for d in dots)):
                return False
    return True


LaurentX = dict[int, Fraction]


@dataclass(frozen=True)
class StepPolynomials:
    P: dict[Vec, Fraction]
    A_minus1: LaurentX
    A_0: LaurentX
    A_1: LaurentX
    B_minus1: LaurentX
    B_0: LaurentX
    B_1: LaurentX

    def A(self, k: int) -> LaurentX:
        return {-1: self.A_minus1, 0: self.A_0, 1: self.A_1}[k]

    def B(self, k: int) -> LaurentX:
        return {-1: self.B_minus1, 0: self.B_0, 1: self.B_1}[k]

    def P_at(self, x, y):
        return sum(w * x**i * y**j for (i, j), w in self.P.items())


def step_polynomials(s: StepSet) -> StepPolynomials:
    P = dict(s.weights)
    A = {k: {i: w for (i, j), w in P.items() if j == k} for k in (-1, 0, 1)}
    B = {k: {j: w for (i, j), w in P.items() if i == k} for k in (-1, 0, 1)}
    return StepPolynomials(P, A[-1], A[0], A[1], B[-1], B[0], B[1])


@dataclass(frozen=True)
class CatalogEntry:
    model_id: int
    steps: StepSet
    expected_nature: str | None = None
    source_note: str = ""
    nonsingular: bool = field(default=True)


NATURE_ALIASES = {
    "alg": "Algebraic",
    "algebraic": "Algebraic",
    "df": "DFiniteNotAlgebraic",
    "d-finite": "DFiniteNotAlgebraic",
    "d-alg": "DAlgebraicNotDFinite",
    "d-algebraic": "DAlgebraicNotDFinite",
    "d-trans": "NotDAlgebraicUpToBound",
}


def _read_catalog_rows(lines: Iterable[str]) -> list[CatalogEntry]:
    entries: list[CatalogEntry] = []
    ids: set[int] = set()
    for lineno, row in enumerate(csv.reader(lines, skipinitialspace=True), start=1):
        if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
            continue
        if len(row) < 2:
            raise CatalogError("expected at least id and step list", lineno)
        try:
            mid = int(row[0])
        except ValueError as exc:
            raise CatalogError(f"bad model id {row[0]!r}", lineno) from exc
        if mid in ids:
            raise CatalogError(f"duplicate model id {mid}", lineno)
        try:
            steps = parse_stepset(row[1])
        except StepSetError as exc:
            raise CatalogError(str(exc), lineno) from exc
        nature = row[2].strip() if len(row) > 2 else ""
        nature = NATURE_ALIASES.get(nature.lower(), nature) if nature and nature != "-" else None
        note = ",".join(row[3:]).strip()
        flagged = "singular" not in note.lower().split()
        if flagged and not is_nonsingular(steps):
            raise CatalogError(f"model {mid} is singular but flagged nonsingular", lineno)
        ids.add(mid)
        entries.append(CatalogEntry(mid, steps, nature, note, flagged))
    return entries


def load_catalog(path: str | Path | None = None, *, name: str | None = None) -> list[CatalogEntry]:
    """Read a catalog file, or a bundled one by ``name`` ("table1", "nonsingular")."""
    if name is not None:
        text = resources.files("conewalk.data").joinpath(f"{name}.csv").read_text()
    else:
        text = Path(path).read_text()  # type: ignore[arg-type]
    return _read_catalog_rows(text.splitlines())
