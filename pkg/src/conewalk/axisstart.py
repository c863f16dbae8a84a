"""Walks in the three-quadrant cone started on the positive x-axis at (p, 0).

With W_B(1/x) = x - F_1 - B_1(1/x) and W_A(1/y) = A_1(1/y) taken from the
(1, 0) enumeration, let I(w) be the compositional inverse of W_B, I(W_B) = x.
Then for every p >= 1

    B_p(1/x) = [w^<0] I^p  at w = W_B(1/x)
    A_p(1/y) = [w^>0] I^p  at w = W_A(1/y)
    F_p      = [w^0]  I^p

and H_p = [w^>=0] I^p is the unique polynomial with x^p - H_p(W_B) in (1/x) Q[1/x][[t]].

Series in one variable reuse :class:`TSeries`: w and x live in the x slot,
y in the y slot.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .enumerate import ConeSpec, count_cone, count_three_quadrant_plane
from .series import Number, TSeries, exact
from .stepset import StepSet


class AxisError(ValueError):
    pass


def _const(N: int, c: Number = 1) -> TSeries:
    return TSeries.monomial(N, 0, 0, 0, c)


def _layer(s: TSeries, n: int) -> dict[int, Number]:
    return {i: v for (k, i, _), v in s.items() if k == n}


class _Powers:
    """Cached integer powers of a series s = x^e (1 + u) with u = O(t)."""

    def __init__(self, s: TSeries, lead: int | None):
        """``lead=None`` allows any s but only nonnegative powers."""
        self.N = s.N
        if lead is not None and (s[(0, lead, 0)] != 1 or any(k == 0 and i != lead for (k, i, _), _v in s.items())):
            raise AxisError("series must have t^0 layer x^lead")
        self.s = s
        self.lead = lead
        self._pos = {0: _const(self.N), 1: s}
        self._neg = {0: _const(self.N)}

    def _inverse(self) -> TSeries:
        # s^-1 = x^-lead (1 + u)^-1 with u = x^-lead s - 1
        u = self.s.remap(lambda i, j: (i - self.lead, j)) - _const(self.N)
        acc = _const(self.N)
        term = _const(self.N)
        for _ in range(self.N):
            term = -term.times(u)
            if term.is_zero():
                break
            acc = acc + term
        return acc.remap(lambda i, j: (i - self.lead, j))

    def __call__(self, m: int) -> TSeries:
        table = self._pos if m >= 0 else self._neg
        k = abs(m)
        if k not in table:
            if m < 0 and self.lead is None:
                raise AxisError("negative power of a series without a monomial head")
            if m < 0 and 1 not in self._neg:
                self._neg[1] = self._inverse()
            base = self.s if m >= 0 else self._neg[1]
            top = max(table)
            while top < k:
                table[top + 1] = table[top].times(base)
                top += 1
        return table[k]


def compose(g: TSeries, powers: _Powers) -> TSeries:
    """g(w) with w replaced by the series behind ``powers``; g keeps w in the x slot."""
    out = TSeries(min(g.N, powers.N))
    for (n, m, _), c in g.items():
        for (k, i, j), v in powers(m).items():
            if n + k <= out.N:
                out.add_to((n + k, i, j), c * v)
    return out


@dataclass
class AxisSeries:
    steps: StepSet
    N: int
    F1: TSeries
    B1: TSeries
    A1: TSeries
    W_B: TSeries  # x slot
    W_A: TSeries  # y slot
    I: TSeries  # x slot holds w
    H: dict[int, TSeries] = field(default_factory=dict)
    A: dict[int, TSeries] = field(default_factory=dict)
    B: dict[int, TSeries] = field(default_factory=dict)
    F: dict[int, TSeries] = field(default_factory=dict)

    def I_power(self, p: int) -> TSeries:
        out = _const(self.N)
        for _ in range(p):
            out = out.times(self.I)
        return out


def revert(W_B: TSeries, N: int) -> TSeries:
    """Solve I(W_B) = x layer by layer in t; I = w + J with J built from w^<=0 terms."""
    rhs = TSeries.monomial(N, 1, 0) - W_B  # F_1 + B_1
    pw = _Powers(W_B, 1)
    J: dict[int, dict[int, Number]] = {}
    for n in range(N + 1):
        layer: dict[int, Number] = defaultdict(int)
        for i, v in _layer(rhs, n).items():
            layer[i] += v
        for k in range(n):
            for m, c in J[k].items():
                for (kk, i, _), v in pw(m).items():
                    if kk == n - k and kk > 0:
                        layer[i] -= c * v
        layer = {i: v for i, v in layer.items() if v}
        if any(i > 0 for i in layer):
            raise AxisError(f"t^{n} layer of the inverse has positive powers of w: {sorted(layer)}")
        J[n] = layer
    I = TSeries.monomial(N, 1, 0)
    for n, layer in J.items():
        for m, c in layer.items():
            I.add_to((n, m, 0), c)
    return I


def build_axis_series(s: StepSet, N: int, pmax: int = 3) -> AxisSeries:
    if N < 0 or pmax < 1:
        raise AxisError("need N >= 0 and pmax >= 1")
    ts = count_cone(s, ConeSpec.three_quadrant((1, 0)), N)
    F1, B1, A1 = ts.F(), ts.B(), ts.A()
    W_B = TSeries.monomial(N, 1, 0) - F1 - B1
    W_A = A1
    I = revert(W_B, N)
    ax = AxisSeries(s, N, F1, B1, A1, W_B, W_A, I)
    pb = _Powers(W_B, 1)
    pa = _Powers(W_A.remap(lambda i, j: (j, i)), None)  # y exponent moved to the x slot
    for p in range(1, pmax + 1):
        Ip = ax.I_power(p)
        H = Ip.select(lambda n, i, j: i >= 0)
        ax.H[p] = H
        ax.F[p] = Ip.select(lambda n, i, j: i == 0)
        ax.B[p] = compose(Ip.select(lambda n, i, j: i < 0), pb)
        ax.A[p] = compose(Ip.select(lambda n, i, j: i > 0), pa).remap(lambda i, j: (0, i))
    return ax


def membership_residual(ax: AxisSeries, p: int, H: TSeries | None = None) -> TSeries:
    """Part of x^p - H_p(W_B) outside (1/x) Q[1/x][[t]]; zero iff H_p is the right polynomial."""
    H = ax.H[p] if H is None else H
    if any(i < 0 for (_, i, _j), _v in H.items()):
        raise AxisError("H must be a polynomial in w")
    rest = TSeries.monomial(ax.N, p, 0) - compose(H, _Powers(ax.W_B, 1))
    return rest.select(lambda n, i, j: i >= 0)


def reversion_residual(ax: AxisSeries, I: TSeries | None = None) -> TSeries:
    """I(W_B) - x recomposed term by term from scratch."""
    I = ax.I if I is None else I
    out = TSeries(ax.N)
    inv = _Powers(ax.W_B, 1)
    for (n, m, _), c in I.items():
        if m >= 0:
            term = _const(ax.N)
            for _ in range(m):
                term = term.times(ax.W_B)
        else:
            term = _const(ax.N)
            for _ in range(-m):
                term = term.times(inv(-1))
        for (k, i, j), v in term.items():
            if n + k <= ax.N:
                out.add_to((n + k, i, j), c * v)
    return out - TSeries.monomial(ax.N, 1, 0)


def first_order(s: TSeries) -> int | None:
    return min((n for (n, _, _), _v in s.items()), default=None)


@dataclass
class AxisReport:
    steps: str
    N: int
    pmax: int
    reversion_residual: int | None
    membership: dict[int, int | None]
    vs_direct: dict[str, bool]
    doubling_direct: bool
    doubling_series: bool
    H_monic: bool

    @property
    def ok(self) -> bool:
        return (
            self.reversion_residual is None
            and all(v is None for v in self.membership.values())
            and all(self.vs_direct.values())
            and self.doubling_direct
            and self.doubling_series
            and self.H_monic
        )

    def to_json(self) -> dict:
        return {
            "steps": self.steps,
            "N": self.N,
            "pmax": self.pmax,
            "reversion_first_nonzero_order": self.reversion_residual,
            "membership_first_nonzero_order": {str(k): v for k, v in self.membership.items()},
            "series_equal_direct": self.vs_direct,
            "doubling_direct": self.doubling_direct,
            "doubling_series": self.doubling_series,
            "H_monic": self.H_monic,
            "pass": self.ok,
        }


def doubling_holds(B1: TSeries, B2: TSeries) -> bool:
    """[x^-1] B_2 = 2 [x^-2] B_1 coefficientwise."""
    N = min(B1.N, B2.N)
    return all(B2[(n, -1, 0)] == 2 * B1[(n, -2, 0)] for n in range(N + 1))


def verify_axis(s: StepSet, N: int = 12, pmax: int = 3) -> AxisReport:
    ax = build_axis_series(s, N, pmax)
    vs: dict[str, bool] = {}
    direct: dict[int, dict[str, TSeries]] = {}
    for p in range(1, pmax + 1):
        d = count_three_quadrant_plane(s, (p, 0), N)
        direct[p] = d
        vs[f"B{p}"] = (ax.B[p] - d["B"]).is_zero()
        vs[f"A{p}"] = (ax.A[p] - d["A"]).is_zero()
        vs[f"F{p}"] = (ax.F[p] - d["F"]).is_zero()
    mem = {p: first_order(membership_residual(ax, p)) for p in range(1, pmax + 1)}
    monic = all(ax.H[p][(0, p, 0)] == 1 and not any(i > p for (_, i, _j), _v in ax.H[p].items()) for p in ax.H)
    monic = monic and all(ax.H[p][(n, p, 0)] == 0 for p in ax.H for n in range(1, N + 1))
    B2 = direct[2]["B"] if pmax >= 2 else count_three_quadrant_plane(s, (2, 0), N)["B"]
    dbl_direct = doubling_holds(direct[1]["B"], B2)
    dbl_series = doubling_holds(ax.B[1], ax.B[2]) if pmax >= 2 else True
    return AxisReport(str(s), N, pmax, first_order(reversion_residual(ax)), mem, vs, dbl_direct, dbl_series, monic)


# ---------------------------------------------------------------------------
# 2:1 identity for walks (2,0) -> (-1,0)


def _touches_D(i: int, j: int) -> bool:
    return (j == 0 and i <= 0) or (i == 0 and j <= 0)


def _in_T(i: int, j: int) -> bool:
    return i == 1 and j <= 0


@dataclass
class CombiRow:
    n: int
    total: Number
    touching: Number

    @property
    def ok(self) -> bool:
        return self.total == 2 * self.touching


def combi_dp(s: StepSet, n_max: int) -> list[CombiRow]:
    """Weighted path counting with a touched-T flag."""
    ws = [(v, exact(w)) for v, w in s.weights]
    cur: dict[tuple[int, int, bool], Number] = {(2, 0, False): 1}
    rows = [CombiRow(0, 0, 0)]
    for n in range(1, n_max + 1):
        nxt: dict[tuple[int, int, bool], Number] = defaultdict(int)
        total: Number = 0
        touch: Number = 0
        for (i, j, f), c in cur.items():
            for (a, b), w in ws:
                i2, j2 = i + a, j + b
                if _touches_D(i2, j2):
                    if (i2, j2) == (-1, 0):
                        total += c * w
                        if f:
                            touch += c * w
                    continue
                nxt[(i2, j2, f or _in_T(i2, j2))] += c * w
        cur = {k: v for k, v in nxt.items() if v}
        rows.append(CombiRow(n, total, touch))
    return rows


def combi_brute(s: StepSet, n_max: int, chunk: int = 1 << 20) -> list[CombiRow]:
    """Enumerate every step sequence; a sequence counts if it first meets D at (-1,0) on its last step."""
    vecs = np.array([v for v, _ in s.weights], dtype=np.int64)
    wlist = [exact(w) for _, w in s.weights]
    k = len(wlist)
    if k**n_max > 10**8:
        raise ValueError(f"{k}^{n_max} sequences is too many for brute force")
    rows = [CombiRow(0, 0, 0)]
    for n in range(1, n_max + 1):
        total: Number = 0
        touch: Number = 0
        for lo in range(0, k**n, chunk):
            codes = np.arange(lo, min(k**n, lo + chunk), dtype=np.int64)
            m = codes.size
            x = np.full(m, 2, dtype=np.int64)
            y = np.zeros(m, dtype=np.int64)
            alive = np.ones(m, dtype=bool)
            hitT = np.zeros(m, dtype=bool)
            counts = np.zeros((m, k), dtype=np.int64)
            rem = codes.copy()
            for step in range(n):
                d = rem % k
                rem //= k
                counts[np.arange(m), d] += 1
                x = x + vecs[d, 0]
                y = y + vecs[d, 1]
                inD = ((y == 0) & (x <= 0)) | ((x == 0) & (y <= 0))
                if step < n - 1:
                    alive &= ~inD
                    hitT |= (x == 1) & (y <= 0)
                else:
                    alive &= (x == -1) & (y == 0)
            for mask, is_touch in ((alive, False), (alive & hitT, True)):
                if not mask.any():
                    continue
                uniq, mult = np.unique(counts[mask], axis=0, return_counts=True)
                acc: Number = 0
                for row, mm in zip(uniq, mult):
                    w: Number = int(mm)
                    for idx, e in enumerate(row):
                        if e:
                            w = w * wlist[idx] ** int(e)
                    acc += w
                if is_touch:
                    touch += acc
                else:
                    total += acc
        rows.append(CombiRow(n, total, touch))
    return rows


@dataclass
class CombiReport:
    steps: str
    brute: list[CombiRow]
    dp: list[CombiRow]

    @property
    def ok(self) -> bool:
        agree = all(a.total == b.total and a.touching == b.touching for a, b in zip(self.brute, self.dp))
        return agree and all(r.ok for r in self.brute) and all(r.ok for r in self.dp)

    def to_json(self) -> dict:
        def enc(v):
            return str(v) if isinstance(v, Fraction) else v

        return {
            "steps": self.steps,
            "table": [{"n": r.n, "total": enc(r.total), "touching": enc(r.touching), "ok": r.ok} for r in self.dp],
            "brute_force_n_max": len(self.brute) - 1,
            "pass": self.ok,
        }


def combi_check(s: StepSet, n_brute: int = 8, n_dp: int = 12) -> CombiReport:
    return CombiReport(str(s), combi_brute(s, n_brute), combi_dp(s, n_dp))
