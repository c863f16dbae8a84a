"""Exact enumeration of walks in three-quadrant and M-quadrant (spiral) cones.

A state of the spiral DP is ``(s, a, b)``: quadrant index ``s`` in ``[-L, K]``
and quadrant-local coordinates ``(a, b)`` with ``a > 0, b >= 0``.  The planar
point is ``r^s(a, b)`` where ``r(a, b) = (-b, a)``.  All stored series use
planar ("global") monomials ``x^i y^j``; the rotated variables ``x_s, y_s``
correspond to local monomials and are recovered with ``TSeries.rotate``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .series import Number, TSeries, exact, rot
from .stepset import StepSet, Vec, step_polynomials


class ConeError(ValueError):
    pass


@dataclass(frozen=True)
class ConeSpec:
    """The cone ``Gamma_{-L} u Gamma~_{-L+1} u ... u Gamma~_K`` and a start point."""

    M: int
    L: int
    K: int
    start: tuple[int, int] = (1, 1)

    def __post_init__(self) -> None:
        if self.M < 1 or self.L < 0 or self.K < 0 or self.L + self.K + 1 != self.M:
            raise ConeError(f"need L+K+1=M with L,K>=0, got M={self.M}, L={self.L}, K={self.K}")
        p, q = self.start
        if not (p > 0 and q >= 0):
            raise ConeError(f"start {self.start} must satisfy p>0, q>=0")
        if self.L == 0 and q == 0:
            # quadrant 0 is then the strict quadrant -L
            raise ConeError(f"start {self.start} lies on the excluded boundary ray when L=0")

    @classmethod
    def make(cls, M: int, L: int | None = None, start: tuple[int, int] = (1, 1)) -> ConeSpec:
        """Default ``L = (M-1)//2``; odd M gives the symmetric cone."""
        if L is None:
            L = (M - 1) // 2
        return cls(M, L, M - 1 - L, tuple(start))  # type: ignore[arg-type]

    @classmethod
    def three_quadrant(cls, start: tuple[int, int] = (1, 1)) -> ConeSpec:
        return cls(3, 1, 1, tuple(start))  # type: ignore[arg-type]

    @property
    def is_three_quadrant(self) -> bool:
        return (self.M, self.L, self.K) == (3, 1, 1)

    def sheets(self) -> range:
        return range(-self.L, self.K + 1)


def _in_closed_quadrant(a: int, b: int) -> bool:
    return a > 0 and b >= 0


def spiral_step(s: int, a: int, b: int, v: Vec) -> tuple[int, int, int] | None:
    """Move from sheet ``s`` at local ``(a, b)`` by planar step ``v``.

    Returns the new ``(sheet, a, b)`` or ``None`` when the step hits the origin.
    """
    da, db = rot(v[0], v[1], -s)
    a2, b2 = a + da, b + db
    if a2 == 0 and b2 == 0:
        return None
    if _in_closed_quadrant(a2, b2):
        return s, a2, b2
    c, d = rot(a2, b2, 1)
    if _in_closed_quadrant(c, d):
        return s - 1, c, d
    c, d = rot(a2, b2, -1)
    if _in_closed_quadrant(c, d):
        return s + 1, c, d
    raise AssertionError("small step left the three adjacent quadrants")  # pragma: no cover


@dataclass
class TruncatedWalkSeries:
    """Exact tables up to t^N for one (model, cone, start)."""

    steps: StepSet
    cone: ConeSpec
    N: int
    Q: dict[int, TSeries]
    S: dict[tuple[int, int], TSeries]
    T: dict[int, TSeries]
    alive_count: list[Number] = field(default_factory=list)
    dead_count: list[Number] = field(default_factory=list)

    # --- three-quadrant views -------------------------------------------------
    def C(self) -> TSeries:
        out = TSeries(self.N)
        for q in self.Q.values():
            out = out + q
        return out

    def dead(self) -> TSeries:
        out = TSeries(self.N)
        for tj in self.T.values():
            out = out + tj
        return out

    def A(self) -> TSeries:
        """Walks ending on the negative y-axis (three-quadrant cone)."""
        self._need_three_quadrant()
        return self.dead().select(lambda n, i, j: i == 0 and j < 0)

    def B(self) -> TSeries:
        """Walks ending on the negative x-axis (three-quadrant cone)."""
        self._need_three_quadrant()
        return self.dead().select(lambda n, i, j: j == 0 and i < 0)

    def F(self) -> TSeries:
        return self.dead().select(lambda n, i, j: i == 0 and j == 0)

    def _need_three_quadrant(self) -> None:
        if not self.cone.is_three_quadrant:
            raise ConeError("A and B tables exist for the three-quadrant cone only")

    # --- spiral-cone split ----------------------------------------------------
    def local(self, series: TSeries, j: int) -> TSeries:
        """Re-express a global series in the local monomials x_j^a y_j^b."""
        return series.rotate(-j)

    def F_j(self, j: int) -> TSeries:
        return self.T[j].select(lambda n, i, k: i == 0 and k == 0)

    def U0(self) -> TSeries:
        """[x_{-L}^{>=1} y_{-L}^0] T_{-L}, as a series in local monomials."""
        return self.local(self.T[-self.cone.L], -self.cone.L).select(lambda n, a, b: a >= 1 and b == 0)

    def U1(self) -> TSeries:
        """[x_{-L}^1 y_{-L}^0] T_{1-L} as a constant-in-x series (zero if M=1)."""
        c = self.cone
        if c.M < 2:
            return TSeries(self.N)
        loc = self.local(self.T[1 - c.L], -c.L).select(lambda n, a, b: a == 1 and b == 0)
        return loc.remap(lambda a, b: (0, 0))

    def U2(self) -> TSeries:
        return self.local(self.T[self.cone.K], self.cone.K).select(lambda n, a, b: a == 0 and b >= 1)

    def A_spiral(self) -> TSeries:
        """A(x_{-L}) = U0 + x_{-L} U1 in local monomials of frame -L."""
        return self.U0() + self.U1().remap(lambda a, b: (1, 0))

    def B_spiral(self) -> TSeries:
        return self.U2()

    def R(self, j: int) -> TSeries:
        """R_j(x_j) = x_j^{-1} S_{j-1,j}, local monomials (a, 0)."""
        return self.local(self.S.get((j - 1, j), TSeries(self.N)), j).remap(lambda a, b: (a - 1, b))

    def Lser(self, j: int) -> TSeries:
        """L_j(y_j) = x_j^{-1} S_{j+1,j} + delta_{j,-L} U1, local monomials (0, b)."""
        out = self.local(self.S.get((j + 1, j), TSeries(self.N)), j).remap(lambda a, b: (a - 1, b))
        if j == -self.cone.L:
            out = out + self.U1()
        return out

    def dump(self) -> list[str]:
        lines = []
        for j in sorted(self.Q):
            lines.append(f"# Q_{j}")
            lines.extend(self.Q[j].dump())
        for j in sorted(self.T):
            lines.append(f"# T_{j}")
            lines.extend(self.T[j].dump())
        return lines

    def summary(self) -> dict:
        out = {
            "N": self.N,
            "M": self.cone.M,
            "L": self.cone.L,
            "K": self.cone.K,
            "start": list(self.cone.start),
            "alive": [str(c) for c in self.alive_count],
            "dead": [str(c) for c in self.dead_count],
            "F": [str(c) for c in self.F().coefficient_list(0, 0)],
        }
        return out


def _weights(steps: StepSet) -> list[tuple[Vec, Number]]:
    return [(v, exact(w)) for v, w in steps.weights]


def count_cone(steps: StepSet, cone: ConeSpec, N: int) -> TruncatedWalkSeries:
    if N < 0:
        raise ValueError(f"truncation order must be >= 0, got {N}")
    L, K = cone.L, cone.K
    ws = _weights(steps)
    Q = {j: TSeries(N) for j in cone.sheets()}
    T = {j: TSeries(N) for j in cone.sheets()}
    S: dict[tuple[int, int], TSeries] = {}
    p, q = cone.start
    cur: dict[tuple[int, int, int], Number] = {(0, p, q): 1}
    Q[0].add_to((0, p, q), 1)
    alive, dead = [1], [0]
    for n in range(1, N + 1):
        nxt: dict[tuple[int, int, int], Number] = defaultdict(int)
        died: Number = 0
        for (s, a, b), c in cur.items():
            for v, w in ws:
                cw = c * w
                res = spiral_step(s, a, b, v)
                if res is None:
                    gi, gj = 0, 0
                    T[s].add_to((n, gi, gj), cw)
                    died += cw
                    continue
                s2, a2, b2 = res
                gi, gj = rot(a2, b2, s2)
                if s2 < -L or s2 > K or (s2 == -L and b2 == 0):
                    T[s].add_to((n, gi, gj), cw)
                    died += cw
                    continue
                nxt[(s2, a2, b2)] += cw
                S.setdefault((s, s2), TSeries(N)).add_to((n, gi, gj), cw)
        cur = {k: v for k, v in nxt.items() if v}
        for (s, a, b), c in cur.items():
            gi, gj = rot(a, b, s)
            Q[s].add_to((n, gi, gj), c)
        alive.append(sum(cur.values()))
        dead.append(died)
    return TruncatedWalkSeries(steps, cone, N, Q, S, T, alive, dead)


# ---------------------------------------------------------------------------
# Residual checks
# ---------------------------------------------------------------------------


@dataclass
class ResidualReport:
    name: str
    valid_to: int
    residual: TSeries

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()

    @property
    def max_abs(self) -> Number:
        return self.residual.max_abs()

    def first_nonzero(self):
        nz = self.residual.nonzero()
        return nz[0] if nz else None


def _kernel_times(series: TSeries, steps: StepSet) -> TSeries:
    P = {v: exact(w) for v, w in steps.weights}
    return series.times_laurent(P, 1) - series


def verify_functional_equation(ts: TruncatedWalkSeries) -> list[ResidualReport]:
    """Residuals of every kernel equation satisfied by the tables (all exact)."""
    N = ts.N
    p, q = ts.cone.start
    start = TSeries.monomial(N, p, q)
    reports = []
    if ts.cone.is_three_quadrant:
        C = ts.C()
        res = C - start - C.times_laurent({v: exact(w) for v, w in ts.steps.weights}, 1) + ts.F() + ts.B() + ts.A()
        reports.append(ResidualReport("three-quadrant equation", N, res))
    zero = TSeries(N)
    for j in ts.cone.sheets():
        rhs = ts.T[j] - ts.S.get((j + 1, j), zero) + ts.S.get((j, j + 1), zero)
        rhs = rhs - ts.S.get((j - 1, j), zero) + ts.S.get((j, j - 1), zero)
        if j == 0:
            rhs = rhs - start
        res = _kernel_times(ts.Q[j], ts.steps) - rhs
        reports.append(ResidualReport(f"sheet {j} equation", N, res))
    reports.extend(verify_refined_equations(ts))
    return reports


def _support_report(name: str, s: TSeries, allowed) -> ResidualReport:
    bad = s.select(lambda n, a, b: not allowed(a, b))
    return ResidualReport(name, s.N, bad)


def verify_support_lemmas(ts: TruncatedWalkSeries) -> list[ResidualReport]:
    """Supports of S_{i,j} and T_j in the local monomials of the relevant frame."""
    c = ts.cone
    L, K, M = c.L, c.K, c.M
    out = []
    for (i, j), s in ts.S.items():
        if j == i + 1:
            out.append(_support_report(f"S_{i},{j} in y_i R[y_i]", ts.local(s, i), lambda a, b: a == 0 and b >= 1))
        elif j == i - 1:
            out.append(_support_report(f"S_{i},{j} in x_j R[y_j]", ts.local(s, j), lambda a, b: a == 1 and b >= 0))
    for j in c.sheets():
        loc = ts.local(ts.T[j], j)
        if M == 1:
            allowed = lambda a, b: a == 0 or b == 0  # noqa: E731
        elif j == -L:
            allowed = lambda a, b: b == 0  # noqa: E731
        elif j == 1 - L and M == 2:
            allowed = lambda a, b: a == 0 and b >= -1  # noqa: E731
        elif j == 1 - L:
            allowed = lambda a, b: a == 0 and b in (0, -1)  # noqa: E731
        elif j == K:
            allowed = lambda a, b: a == 0 and b >= 0  # noqa: E731
        else:
            allowed = lambda a, b: a == 0 and b == 0  # noqa: E731
        out.append(_support_report(f"T_{j} support", loc, allowed))
    return out


def verify_refined_equations(ts: TruncatedWalkSeries) -> list[ResidualReport]:
    """Rebuild each K*Q_j from the univariate series F_j, U0, U1, U2, R_j, L_j."""
    c = ts.cone
    L, K, N = c.L, c.K, ts.N
    p, q = c.start
    out = list(verify_support_lemmas(ts))

    def glob(series: TSeries, j: int) -> TSeries:
        return series.rotate(j)

    # T_j = F_j + delta U0 + delta x_{-L} U1 + delta U2
    for j in c.sheets():
        split = ts.F_j(j)
        if c.M == 1:
            split = split + glob(ts.U0(), j) + glob(ts.U2(), j)
        else:
            if j == -L:
                split = split + glob(ts.U0(), j)
            if j == 1 - L:
                split = split + glob(ts.U1().remap(lambda a, b: (1, 0)), -L)
            if j == K:
                split = split + glob(ts.U2(), j)
        out.append(ResidualReport(f"T_{j} split", N, ts.T[j] - split))

    for j in c.sheets():
        rhs = TSeries(N)
        if j == 0:
            rhs = rhs - TSeries.monomial(N, p, q)
        rhs = rhs + ts.F_j(j)
        if c.M == 1:
            rhs = rhs + glob(ts.U0(), 0) + glob(ts.U2(), 0)
        else:
            if j < K:
                # -x_j L_j(y_j) + y_j R_{j+1}(y_j)
                Lj = ts.Lser(j).remap(lambda a, b: (a + 1, b))
                Rj1 = ts.R(j + 1).remap(lambda a, b: (b, a + 1))
                rhs = rhs - glob(Lj, j) + glob(Rj1, j)
            if j > -L:
                # -x_j R_j(x_j) + y_j^{-1} L_{j-1}(x_j)
                Rj = ts.R(j).remap(lambda a, b: (a + 1, b))
                Lj1 = ts.Lser(j - 1).remap(lambda a, b: (b, a - 1))
                rhs = rhs - glob(Rj, j) + glob(Lj1, j)
            if j == -L:
                rhs = rhs + glob(ts.A_spiral(), j)
            if j == K:
                rhs = rhs + glob(ts.B_spiral(), j)
        res = _kernel_times(ts.Q[j], ts.steps) - rhs
        out.append(ResidualReport(f"sheet {j} refined equation", N, res))
    return out


def corrupt(ts: TruncatedWalkSeries, sheet: int, key: tuple[int, int, int], delta: Number = 1) -> TruncatedWalkSeries:
    """Copy of ``ts`` with one Q coefficient shifted (fault injection)."""
    Q = {j: s.copy() for j, s in ts.Q.items()}
    Q[sheet].add_to(key, delta)
    return TruncatedWalkSeries(ts.steps, ts.cone, ts.N, Q, ts.S, ts.T, ts.alive_count, ts.dead_count)


# ---------------------------------------------------------------------------
# Three-quadrant specific views
# ---------------------------------------------------------------------------


@dataclass
class VHSplit:
    V1: TSeries  # monomials y^j
    V2: TSeries
    H1: TSeries  # monomials x^i
    H2: TSeries
    residuals: list[ResidualReport]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.residuals)


def extract_vh(ts: TruncatedWalkSeries) -> VHSplit:
    """Split the quadrant equations into the univariate series V1, V2, H1, H2."""
    ts._need_three_quadrant()
    N = ts.N
    p, q = ts.cone.start
    V = _kernel_times(ts.Q[1], ts.steps) - ts.B()
    H = _kernel_times(ts.Q[-1], ts.steps) - ts.A()
    reps = [
        _support_report("V in R[y] + x R[y]", V, lambda i, j: i in (0, 1) and j >= 0),
        _support_report("H in R[x] + y^-1 R[x]", H, lambda i, j: j in (0, -1) and i >= 0),
    ]
    V1 = V.select(lambda n, i, j: i == 0)
    V2 = V.select(lambda n, i, j: i == 1).remap(lambda i, j: (0, j))
    H1 = H.select(lambda n, i, j: j == 0)
    H2 = H.select(lambda n, i, j: j == -1).remap(lambda i, j: (i, 0))
    rhs0 = (
        ts.F()
        - TSeries.monomial(N, p, q)
        - V1
        - V2.remap(lambda i, j: (1, j))
        - H1
        - H2.remap(lambda i, j: (i, -1))
    )
    reps.append(ResidualReport("quadrant 0 equation", N, _kernel_times(ts.Q[0], ts.steps) - rhs0))
    reps.append(
        ResidualReport(
            "quadrant 1 equation", N, _kernel_times(ts.Q[1], ts.steps) - ts.B() - V1 - V2.remap(lambda i, j: (1, j))
        )
    )
    reps.append(
        ResidualReport(
            "quadrant -1 equation", N, _kernel_times(ts.Q[-1], ts.steps) - ts.A() - H1 - H2.remap(lambda i, j: (i, -1))
        )
    )
    return VHSplit(V1, V2, H1, H2, reps)


def in_three_quadrant(i: int, j: int) -> bool:
    return i > 0 or j > 0


def count_three_quadrant_plane(steps: StepSet, start: tuple[int, int], N: int, forbid: tuple = ()) -> dict[str, TSeries]:
    """Direct DP on Z^2 for the three-quadrant cone, independent of the spiral DP.

    ``forbid`` lists transitions ``((i1, j1), (i2, j2))`` that are not allowed.
    Returns ``C``, ``A``, ``B``, ``F`` (global monomials).
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    if not in_three_quadrant(*start):
        raise ConeError(f"start {start} outside the three-quadrant cone")
    ws = _weights(steps)
    forbidden = set(forbid)
    out = {k: TSeries(N) for k in ("C", "A", "B", "F")}
    cur: dict[tuple[int, int], Number] = {tuple(start): 1}
    out["C"].add_to((0, start[0], start[1]), 1)
    for n in range(1, N + 1):
        nxt: dict[tuple[int, int], Number] = defaultdict(int)
        for (i, j), c in cur.items():
            for (a, b), w in ws:
                i2, j2 = i + a, j + b
                if ((i, j), (i2, j2)) in forbidden:
                    continue
                if in_three_quadrant(i2, j2):
                    nxt[(i2, j2)] += c * w
                elif i2 == 0 and j2 == 0:
                    out["F"].add_to((n, 0, 0), c * w)
                elif i2 == 0:
                    out["A"].add_to((n, 0, j2), c * w)
                elif j2 == 0:
                    out["B"].add_to((n, i2, 0), c * w)
                else:  # pragma: no cover - unreachable with small steps
                    raise AssertionError("jumped into the open negative quadrant")
        cur = {k: v for k, v in nxt.items() if v}
        for (i, j), c in cur.items():
            out["C"].add_to((n, i, j), c)
    return out


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


@dataclass
class BruteForceTable:
    """Weighted counts keyed by ``(n, sheet, i, j)`` (planar coordinates)."""

    alive: dict[tuple[int, int, int, int], Number]
    dead: dict[tuple[int, int, int, int], Number]


def _group_weights(idx_counts: np.ndarray, wlist: list[Number], mult: np.ndarray) -> list[Number]:
    out = []
    for row, m in zip(idx_counts, mult):
        w: Number = int(m)
        for k, e in enumerate(row):
            if e:
                w = w * wlist[k] ** int(e)
        out.append(w)
    return out


def brute_force_count(steps: StepSet, cone: ConeSpec, n: int, chunk: int = 1 << 20) -> BruteForceTable:
    """Enumerate every step sequence of each length <= n and simulate it."""
    if n < 0:
        raise ValueError("n must be >= 0")
    nsteps = len(steps.weights)
    if nsteps**n > 10**8:
        raise ValueError(f"{nsteps}^{n} sequences is too many for brute force")
    vecs = np.array([v for v, _ in steps.weights], dtype=np.int64)
    wlist = [exact(w) for _, w in steps.weights]
    L, K = cone.L, cone.K
    p, q = cone.start
    alive: dict[tuple[int, int, int, int], Number] = defaultdict(int)
    dead: dict[tuple[int, int, int, int], Number] = defaultdict(int)
    alive[(0, 0, p, q)] = 1
    for length in range(1, n + 1):
        total = nsteps**length
        for lo in range(0, total, chunk):
            codes = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
            m = codes.size
            x = np.full(m, p, dtype=np.int64)
            y = np.full(m, q, dtype=np.int64)
            s = np.zeros(m, dtype=np.int64)
            ok = np.ones(m, dtype=bool)
            counts = np.zeros((m, nsteps), dtype=np.int64)
            rem = codes.copy()
            died_at_end = np.zeros(m, dtype=bool)
            died_from = np.zeros(m, dtype=np.int64)
            for k in range(length):
                d = rem % nsteps
                rem //= nsteps
                counts[np.arange(m), d] += 1
                x2 = x + vecs[d, 0]
                y2 = y + vecs[d, 1]
                origin = (x2 == 0) & (y2 == 0)
                cls = np.where((x2 > 0) & (y2 >= 0), 0, np.where((x2 <= 0) & (y2 > 0), 1, np.where((x2 < 0) & (y2 <= 0), 2, 3)))
                delta = ((cls - s + 1) % 4) - 1
                s2 = s + delta
                on_ray = np.where(cls % 2 == 0, y2 == 0, x2 == 0)
                outside = origin | (s2 < -L) | (s2 > K) | ((s2 == -L) & on_ray)
                if k == length - 1:
                    died_at_end = ok & outside
                    died_from = s.copy()
                ok &= ~outside
                x, y, s = x2, y2, s2
            for mask, store, sheet in ((ok, alive, s), (died_at_end, dead, died_from)):
                if not mask.any():
                    continue
                keys = np.column_stack([sheet[mask], x[mask], y[mask], counts[mask]])
                uniq, mult = np.unique(keys, axis=0, return_counts=True)
                ws = _group_weights(uniq[:, 3:], wlist, mult)
                for row, w in zip(uniq, ws):
                    store[(length, int(row[0]), int(row[1]), int(row[2]))] += w
    return BruteForceTable(dict(alive), dict(dead))


def tables_from_series(ts: TruncatedWalkSeries, n: int) -> BruteForceTable:
    alive = {}
    dead = {}
    for j, s in ts.Q.items():
        for (k, i, jj), v in s.items():
            if k <= n:
                alive[(k, j, i, jj)] = v
    for j, s in ts.T.items():
        for (k, i, jj), v in s.items():
            if k <= n:
                dead[(k, j, i, jj)] = v
    return BruteForceTable(alive, dead)


def oracle_equivalent(steps: StepSet, cone: ConeSpec, n: int) -> bool:
    bf = brute_force_count(steps, cone, n)
    dp = tables_from_series(count_cone(steps, cone, n), n)
    return bf.alive == dp.alive and bf.dead == dp.dead


# ---------------------------------------------------------------------------
# Forbidden transition between (0,1) and (1,0)
# ---------------------------------------------------------------------------


@dataclass
class ForbiddenStepReport:
    L: TSeries
    M: TSeries
    C: TSeries
    L1: TSeries
    C_tilde: TSeries
    weight: Fraction
    residual: ResidualReport
    degenerate: bool

    @property
    def ok(self) -> bool:
        return self.residual.ok


def forbidden_step_series(steps: StepSet, start: tuple[int, int], N: int) -> ForbiddenStepReport:
    """Check L = C - w_{(1,-1)} t L_1 C~ for the transition (0,1) -> (1,0)."""
    down = ((0, 1), (1, 0))
    up = ((1, 0), (0, 1))
    Lser = count_three_quadrant_plane(steps, start, N, forbid=(down,))["C"]
    Mser = count_three_quadrant_plane(steps, start, N, forbid=(down, up))["C"]
    C = count_three_quadrant_plane(steps, start, N)["C"]
    C_tilde = count_three_quadrant_plane(steps, (1, 0), N)["C"]
    L1 = Lser.select(lambda n, i, j: (i, j) == (0, 1)).remap(lambda i, j: (0, 0))
    w = steps.weight((1, -1))
    rhs = C - L1.times(C_tilde).times_laurent({(0, 0): exact(w)}, 1)
    res = ResidualReport("forbidden-step relation", N, Lser - rhs)
    return ForbiddenStepReport(Lser, Mser, C, L1, C_tilde, w, res, w == 0)


def product_sequences(steps: StepSet, n: int):
    """All step sequences of length n (small n; used in tests)."""
    return product(steps.steps, repeat=n)
