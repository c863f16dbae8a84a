"""Contour-integral evaluation of F, B(u), A(u) and checks against enumeration.

The contour is a horizontal segment z0 -> z0 + pi inside the closure of
Omega_0.  Every integrand is pi-periodic, so the trapezoid rule converges
geometrically; the node count is doubled until two estimates agree.

Normalization: with ``t_factor=False`` the integrals are

    F    = -(1/2 pi i) int X^p Y^q W'/W
    B(u) =  (1/2 pi i) int X^p Y^q W'/(W - W(u))
    A(u) = -(1/2 pi i) int X^p Y^q (W(u)/W) W'/(W - W(u))

which satisfy X^p Y^q = A + F + B on the curve.  ``t_factor=True`` divides
all three by t; it is kept only to document that this variant fails the
enumeration cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .elliptic import Boundary, EllipticContext, EllipticError
from .enumerate import ConeSpec, count_cone, extract_vh
from .kernelnum import to_mpf
from .series import TSeries


class ContourError(RuntimeError):
    pass


@dataclass(frozen=True)
class ContourSpec:
    z0: complex
    nodes: int = 2048
    tol: float = 1e-10
    max_nodes: int = 1 << 15
    t_factor: bool = False

    def shifted(self, dy: float) -> ContourSpec:
        return ContourSpec(self.z0 + 1j * dy, self.nodes, self.tol, self.max_nodes, self.t_factor)


def find_base_point(ctx: EllipticContext, margin: float = 1e-2, heights: int = 81, n_re: int = 256) -> complex:
    """Pick the height between -gamma/2 and gamma/2 whose horizontal line is deepest inside Omega_0."""
    g = ctx.gamma.imag
    re = np.linspace(0, np.pi, n_re, endpoint=False)
    best_m, best_h = np.inf, None
    for h in np.linspace(-g / 2, g / 2, heights):
        z = re + 1j * h
        m = float(np.max(np.maximum(np.abs(ctx.X(z)), np.abs(ctx.Y(z)))))
        if m < best_m:
            best_m, best_h = m, h
    if best_h is None or best_m >= 1 - margin:
        raise ContourError(f"no horizontal line inside Omega_0 (best max|X|,|Y| = {best_m:.4f})")
    z0 = complex(0, best_h)
    if ctx.region_index(z0) != 0:
        raise ContourError(f"base point {z0} is not in Omega_0")
    return z0


def default_spec(ctx: EllipticContext, **kw) -> ContourSpec:
    return ContourSpec(find_base_point(ctx), **kw)


@dataclass
class _Nodes:
    h: float
    z: np.ndarray
    xy: np.ndarray
    W: np.ndarray
    dlogW: np.ndarray


class ContourIntegrator:
    """Caches X^p Y^q, W, W'/W on successively refined node sets."""

    def __init__(self, ctx: EllipticContext, p: int, q: int, spec: ContourSpec):
        self.ctx, self.p, self.q, self.spec = ctx, p, q, spec
        self._cache: dict[int, _Nodes] = {}
        t = float(to_mpf(ctx.kn.t))
        self.prefactor = 1 / (2j * np.pi) / (t if spec.t_factor else 1.0)

    def _nodes(self, n: int) -> _Nodes:
        if n not in self._cache:
            z = self.spec.z0 + np.pi * np.arange(n) / n
            X, Y = self.ctx.XY(z)
            if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
                raise ContourError("X or Y has a pole on the contour")
            self._cache[n] = _Nodes(np.pi / n, z, X**self.p * Y**self.q, self.ctx.W(z), self.ctx.W_logderiv(z))
        return self._cache[n]

    def integrate(self, kernel) -> tuple[complex, int, float]:
        """Trapezoid with doubling; ``kernel(nodes)`` returns the integrand values."""
        n = self.spec.nodes
        prev = None
        while True:
            nd = self._nodes(n)
            val = complex(nd.h * np.sum(kernel(nd)))
            if prev is not None:
                err = abs(val - prev)
                if err < self.spec.tol:
                    return val, n, err
            if 2 * n > self.spec.max_nodes:
                raise ContourError(f"quadrature did not converge with {n} nodes (last change {abs(val - prev):.2e})")
            prev = val
            n *= 2

    def F(self) -> IntegralValue:
        v, n, e = self.integrate(lambda nd: nd.xy * nd.dlogW)
        return IntegralValue(-self.prefactor * v, n, e)

    def _residue(self, u: complex) -> complex:
        return complex(self.ctx.X(u) ** self.p * self.ctx.Y(u) ** self.q)

    def _w_at(self, u: complex) -> complex:
        return complex(np.asarray(self.ctx.W(u)).reshape(-1)[0])

    def B(self, u: complex) -> IntegralValue:
        Wu = self._w_at(u)
        if np.isinf(Wu):
            return IntegralValue(0j, 0, 0.0)
        v, n, e = self.integrate(lambda nd: nd.xy * nd.W * nd.dlogW / (nd.W - Wu))
        val = self.prefactor * v
        if self._below_line(u):
            # the defining contour runs below u
            val += self._residue(u) / self._tdiv()
        return IntegralValue(val, n, e)

    def A(self, u: complex) -> IntegralValue:
        Wu = self._w_at(u)
        if Wu == 0:
            return IntegralValue(0j, 0, 0.0)
        v, n, e = self.integrate(lambda nd: nd.xy * Wu * nd.dlogW / (nd.W - Wu))
        val = -self.prefactor * v
        if self._above_line(u):
            # the defining contour runs above u
            val += self._residue(u) / self._tdiv()
        return IntegralValue(val, n, e)

    def _tdiv(self) -> float:
        return float(to_mpf(self.ctx.kn.t)) if self.spec.t_factor else 1.0

    def _in_omega0(self, u: complex) -> bool:
        try:
            return self.ctx.region_index(u) == 0
        except Boundary:
            return False

    def _below_line(self, u: complex) -> bool:
        return self._in_omega0(u) and u.imag < self.spec.z0.imag

    def _above_line(self, u: complex) -> bool:
        return self._in_omega0(u) and u.imag > self.spec.z0.imag


@dataclass(frozen=True)
class IntegralValue:
    value: complex
    nodes: int
    change: float


# ---------------------------------------------------------------------------
# enumeration side


@dataclass
class SeriesOracle:
    """Truncated F, A, B, V1, V2, H1, H2 evaluated at a numeric t with tail bounds."""

    N: int
    t: float
    P11: float
    F: TSeries
    A: TSeries
    B: TSeries
    V1: TSeries
    V2: TSeries
    H1: TSeries
    H2: TSeries

    @classmethod
    def build(cls, ctx: EllipticContext, p: int, q: int, N: int) -> SeriesOracle:
        s = ctx.kn.steps
        ts = count_cone(s, ConeSpec.three_quadrant((p, q)), N)
        vh = extract_vh(ts)
        if not vh.ok:
            raise ContourError("V/H split failed its residual checks")
        return cls(N, float(to_mpf(ctx.kn.t)), float(s.total_weight()), ts.F(), ts.A(), ts.B(), vh.V1, vh.V2, vh.H1, vh.H2)

    def tail(self, factor: float = 1.0) -> float:
        r = self.t * self.P11
        return factor * r ** (self.N + 1) / (1 - r)

    def F_value(self) -> float:
        return self.F.evaluate(1, 1, self.t).real

    def B_value(self, X: complex) -> complex:
        """B(1/x) at x = X with |1/X| <= 1."""
        return self.B.evaluate(X, 1, self.t)

    def A_value(self, Y: complex) -> complex:
        return self.A.evaluate(1, Y, self.t)

    def LV(self, X: complex, Y: complex) -> complex:
        return self.V1.evaluate(1, Y, self.t) + X * self.V2.evaluate(1, Y, self.t)

    def LH(self, X: complex, Y: complex) -> complex:
        return self.H1.evaluate(X, 1, self.t) + self.H2.evaluate(X, 1, self.t) / Y


# ---------------------------------------------------------------------------
# reports


@dataclass
class Comparison:
    label: str
    integral: complex
    series: complex
    tolerance: float

    @property
    def diff(self) -> float:
        return abs(self.integral - self.series)

    @property
    def ok(self) -> bool:
        return self.diff <= self.tolerance

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "integral": [self.integral.real, self.integral.imag],
            "series": [self.series.real, self.series.imag],
            "diff": self.diff,
            "tolerance": self.tolerance,
            "pass": self.ok,
        }


def sample_region(ctx: EllipticContext, allowed: set[int], k: int, rng: np.random.Generator, margin: float = 0.05) -> list[complex]:
    """k points z with region_index in ``allowed`` and |X|, |Y| not within ``margin`` of 1."""
    h = ctx.pitau.imag
    lo = min(allowed) * h / 4 - h / 4
    hi = max(allowed) * h / 4 + h / 4
    out: list[complex] = []
    tries = 0
    while len(out) < k:
        tries += 1
        if tries > 200 * k:
            raise EllipticError(f"could not sample {k} points in Omega{sorted(allowed)}")
        z = complex(rng.uniform(0, np.pi), rng.uniform(lo, hi))
        if float(ctx.boundary_gap(z)) < margin:
            continue
        if abs(complex(ctx.X(z))) > 1e6 or abs(complex(ctx.Y(z))) > 1e6:
            continue
        try:
            if ctx.region_index(z) in allowed:
                out.append(z)
        except Boundary:
            continue
    return out


@dataclass
class IntegralReport:
    steps: str
    t: str
    p: int
    q: int
    N: int
    spec: ContourSpec
    F_integral: complex
    F_series: float
    tail_bound: float
    comparisons: list[Comparison] = field(default_factory=list)

    @property
    def F_imag(self) -> float:
        return abs(self.F_integral.imag)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.comparisons) and self.F_imag < 1e-8

    def to_json(self) -> dict:
        return {
            "steps": self.steps,
            "t": self.t,
            "p": self.p,
            "q": self.q,
            "N": self.N,
            "z0": [self.spec.z0.real, self.spec.z0.imag],
            "nodes": self.spec.nodes,
            "quadrature_tol": self.spec.tol,
            "t_factor": self.spec.t_factor,
            "F_integral": self.F_integral.real,
            "F_integral_imag": self.F_integral.imag,
            "F_series": self.F_series,
            "tail_bound": self.tail_bound,
            "comparisons": [c.to_json() for c in self.comparisons],
            "pass": self.ok,
        }


def verify_integral(
    ctx: EllipticContext,
    p: int = 1,
    q: int = 1,
    N: int = 30,
    n_points: int = 5,
    seed: int = 0,
    spec: ContourSpec | None = None,
    extra_tol: float = 1e-8,
) -> IntegralReport:
    """Integral F, B(u), A(u) against the enumerated series at sampled in-region u."""
    spec = spec or default_spec(ctx)
    ci = ContourIntegrator(ctx, p, q, spec)
    so = SeriesOracle.build(ctx, p, q, N)
    rng = np.random.default_rng(seed)
    tail = so.tail()
    Fi = ci.F().value
    rep = IntegralReport(str(ctx.kn.steps), str(ctx.kn.t), p, q, N, spec, Fi, so.F_value(), tail)
    rep.comparisons.append(Comparison("F", Fi, so.F_value(), tail + extra_tol))
    for u in sample_region(ctx, {1, 2}, n_points, rng):
        X = complex(ctx.X(u))
        rep.comparisons.append(Comparison(f"B({u:.4f})", ci.B(u).value, so.B_value(X), tail + extra_tol))
    for u in sample_region(ctx, {-1, -2}, n_points, rng):
        Y = complex(ctx.Y(u))
        rep.comparisons.append(Comparison(f"A({u:.4f})", ci.A(u).value, so.A_value(Y), tail + extra_tol))
    return rep


# ---------------------------------------------------------------------------
# characterization checks


@dataclass
class CharacterizationReport:
    B_at_poles: list[float]
    curve_rel: list[float]
    qdiff: list[float]
    series_omega0: list[float]
    path_shift: float

    def ok(self, root_tol: float = 1e-6, res_tol: float = 1e-7) -> bool:
        return (
            max(self.B_at_poles) < root_tol
            and max(self.curve_rel) < res_tol
            and max(self.qdiff) < res_tol
            and self.path_shift < res_tol
        )

    def to_json(self) -> dict:
        return {
            "B_at_poles": self.B_at_poles,
            "curve_relation_residuals": self.curve_rel,
            "qdiff_residuals": self.qdiff,
            "series_vs_integral_omega0": self.series_omega0,
            "path_shift": self.path_shift,
        }


def characterization_checks(
    ctx: EllipticContext, p: int = 1, q: int = 1, N: int = 30, n_points: int = 10, seed: int = 0, spec: ContourSpec | None = None
) -> CharacterizationReport:
    """B at the poles of X, the X^p Y^q = A + F + B residual, the q-difference, path independence.

    The q-difference B(z + 2 pi tau - 2 gamma) - B(z) = J(z) is checked at z in Omega_0:
    B(z) = -L_V(z) from the series, and B(z + 2 pi tau - 2 gamma) is reached through
    B(w) = B(pi tau - gamma - w), X^p Y^q = A + F + B and A(w) = A(-pi tau + gamma - w),
    landing on A(z) = -L_H(z).
    """
    spec = spec or default_spec(ctx)
    ci = ContourIntegrator(ctx, p, q, spec)
    so = SeriesOracle.build(ctx, p, q, N)
    rng = np.random.default_rng(seed)
    pt, g = ctx.pitau, ctx.gamma
    X, Y = ctx.X, ctx.Y

    def xy(z):
        return complex(X(z) ** p * Y(z) ** q)

    poles = [ctx.delta, pt - g - ctx.delta]
    B_at_poles = []
    for d in poles:
        for eta in (1e-9, 1e-9j):
            B_at_poles.append(abs(ci.B(d + eta).value))

    F = ci.F().value
    pts = sample_region(ctx, {0}, n_points, rng, margin=0.02)
    curve_rel = []
    series_cmp = []
    for u in pts:
        A_u, B_u = ci.A(u).value, ci.B(u).value
        curve_rel.append(abs(xy(u) - A_u - F - B_u))
        Xu, Yu = complex(X(u)), complex(Y(u))
        series_cmp.append(max(abs(B_u + so.LV(Xu, Yu)), abs(A_u + so.LH(Xu, Yu))))

    qdiff = []
    Fs = so.F_value()
    for z in pts:
        Xz, Yz = complex(X(z)), complex(Y(z))
        B_z = -so.LV(Xz, Yz)
        v = -pt + g - z
        B_shift = xy(v) - Fs + so.LH(Xz, Yz)
        J = complex((X(z - 2 * g) ** p - X(z) ** p) * Y(z) ** q)
        qdiff.append(abs(B_shift - B_z - J))

    dy = 0.1 * abs(g.imag)
    shifted = [ContourIntegrator(ctx, p, q, spec.shifted(s)).F().value for s in (dy, -dy)]
    path_shift = max(abs(v - F) for v in shifted)
    return CharacterizationReport(B_at_poles, curve_rel, qdiff, series_cmp, path_shift)


def f_series_value(ctx: EllipticContext, p: int, q: int, N: int) -> tuple[float, float]:
    so = SeriesOracle.build(ctx, p, q, N)
    return so.F_value(), so.tail()


def exact_t(t) -> Fraction:
    return t if isinstance(t, Fraction) else Fraction(t).limit_denominator(10**12)
