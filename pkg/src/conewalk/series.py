"""Exact truncated series in t whose coefficients are Laurent polynomials in x, y.

A coefficient is keyed by ``(n, i, j)`` for the monomial ``t^n x^i y^j``.
Univariate series simply keep one exponent at zero.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

Number = int | Fraction
Key = tuple[int, int, int]


def exact(w: Fraction | int) -> Number:
    """Demote integral Fractions to int so unweighted counts stay fast."""
    if isinstance(w, Fraction) and w.denominator == 1:
        return int(w.numerator)
    return w


def rot(a: int, b: int, k: int) -> tuple[int, int]:
    """Apply the quarter-turn r(a, b) = (-b, a) k times (k may be negative)."""
    k %= 4
    if k == 0:
        return a, b
    if k == 1:
        return -b, a
    if k == 2:
        return -a, -b
    return b, -a


@dataclass
class TSeries:
    """Sparse exact series, truncated at t-order ``N`` (inclusive)."""

    N: int
    coeffs: dict[Key, Number] = field(default_factory=dict)

    @classmethod
    def monomial(cls, N: int, i: int, j: int, n: int = 0, c: Number = 1) -> TSeries:
        return cls(N, {(n, i, j): c} if n <= N else {})

    def copy(self) -> TSeries:
        return TSeries(self.N, dict(self.coeffs))

    def items(self) -> Iterator[tuple[Key, Number]]:
        return iter(self.coeffs.items())

    def __getitem__(self, key: Key) -> Number:
        return self.coeffs.get(key, 0)

    def add_to(self, key: Key, c: Number) -> None:
        if key[0] > self.N or c == 0:
            return
        v = self.coeffs.get(key, 0) + c
        if v:
            self.coeffs[key] = v
        else:
            self.coeffs.pop(key, None)

    def _combine(self, other: TSeries, sign: int) -> TSeries:
        out = TSeries(min(self.N, other.N), {k: v for k, v in self.coeffs.items() if k[0] <= min(self.N, other.N)})
        for k, v in other.coeffs.items():
            out.add_to(k, sign * v)
        return out

    def __add__(self, other: TSeries) -> TSeries:
        return self._combine(other, 1)

    def __sub__(self, other: TSeries) -> TSeries:
        return self._combine(other, -1)

    def __neg__(self) -> TSeries:
        return TSeries(self.N, {k: -v for k, v in self.coeffs.items()})

    def scale(self, c: Number) -> TSeries:
        return TSeries(self.N, {k: v * c for k, v in self.coeffs.items()} if c else {})

    def times_laurent(self, poly: Mapping[tuple[int, int], Number], t_shift: int = 0) -> TSeries:
        """Multiply by ``t^t_shift * poly(x, y)``."""
        out = TSeries(self.N)
        for (n, i, j), v in self.coeffs.items():
            if n + t_shift > self.N:
                continue
            for (a, b), w in poly.items():
                out.add_to((n + t_shift, i + a, j + b), v * w)
        return out

    def times(self, other: TSeries) -> TSeries:
        N = min(self.N, other.N)
        acc: dict[Key, Number] = defaultdict(int)
        for (n1, i1, j1), v1 in self.coeffs.items():
            for (n2, i2, j2), v2 in other.coeffs.items():
                if n1 + n2 <= N:
                    acc[(n1 + n2, i1 + i2, j1 + j2)] += v1 * v2
        return TSeries(N, {k: v for k, v in acc.items() if v})

    def truncate(self, N: int) -> TSeries:
        return TSeries(min(N, self.N), {k: v for k, v in self.coeffs.items() if k[0] <= N})

    def select(self, pred: Callable[[int, int, int], bool]) -> TSeries:
        return TSeries(self.N, {k: v for k, v in self.coeffs.items() if pred(*k)})

    def remap(self, f: Callable[[int, int], tuple[int, int]]) -> TSeries:
        out = TSeries(self.N)
        for (n, i, j), v in self.coeffs.items():
            a, b = f(i, j)
            out.add_to((n, a, b), v)
        return out

    def rotate(self, k: int) -> TSeries:
        """Rewrite monomials through r^k, i.e. change of quadrant frame."""
        return self.remap(lambda i, j: rot(i, j, k))

    def support(self) -> set[tuple[int, int]]:
        return {(i, j) for _, i, j in self.coeffs}

    def is_zero(self) -> bool:
        return not self.coeffs

    def nonzero(self) -> list[tuple[Key, Number]]:
        return sorted(self.coeffs.items())

    def coefficient_list(self, i: int, j: int) -> list[Number]:
        return [self.coeffs.get((n, i, j), 0) for n in range(self.N + 1)]

    def evaluate(self, x: complex, y: complex, t: complex) -> complex:
        return sum(complex(v) * t**n * x**i * y**j for (n, i, j), v in self.coeffs.items())

    def max_abs(self) -> Number:
        return max((abs(v) for v in self.coeffs.values()), default=0)

    def dump(self) -> Iterable[str]:
        """Lines ``n i j num/den`` sorted by key."""
        for (n, i, j), v in sorted(self.coeffs.items()):
            f = Fraction(v)
            yield f"{n} {i} {j} {f.numerator}/{f.denominator}"
