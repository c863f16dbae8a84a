"""Theta functions, the uniformization X(z), Y(z), the regions Omega_j and W(z).

Everything here works in double precision complex arithmetic on numpy arrays.
The z-plane has periods pi and pi*tau.  Weierstrass p on that lattice is
obtained from log-derivatives of theta, so no lattice sums are needed.

Poles are returned as ``complex(inf)`` by an explicit check on the denominator,
never through overflow.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable

import mpmath as mp
import numpy as np

from .kernelnum import INF, KernelNumerics, gamma_j, to_mpf

POLE = complex(np.inf, 0.0)


class EllipticError(RuntimeError):
    pass


class Boundary(EllipticError):
    """A point numerically on a region boundary (|X| or |Y| close to 1)."""

    def __init__(self, z: complex, gap: float):
        super().__init__(f"z={z} lies within {gap:.2e} of a region boundary")
        self.z = z
        self.gap = gap


# ---------------------------------------------------------------------------
# theta


@dataclass(frozen=True)
class Theta:
    """theta(z) = sum_n (-1)^n q^{n(n+1)} (e^{(2n+1)iz} - e^{-(2n+1)iz}), q = e^{i pi tau}."""

    tau: complex
    nterms: int

    @classmethod
    def make(cls, tau: complex, eps: float = 1e-17) -> Theta:
        tau = complex(tau)
        if tau.imag <= 0:
            raise ValueError(f"tau must lie in the upper half plane, got {tau}")
        h = np.pi * tau.imag
        # reduced |Im z| <= h/2, so term n is about exp(-h (n^2 - 1/2))
        n = 1
        while np.exp(-h * (n * n - 0.5)) > eps:
            n += 1
        return cls(tau, n + 1)

    @property
    def period(self) -> complex:
        return np.pi * self.tau

    def _reduce(self, z):
        """z = w + m pi + k pi tau with w in the base strip."""
        z = np.asarray(z, dtype=complex)
        k = np.round(z.imag / self.period.imag)
        w = z - k * self.period
        m = np.round(w.real / np.pi)
        return w - m * np.pi, m, k

    def _series(self, w, deriv: int = 0):
        q = np.exp(1j * np.pi * self.tau)
        out = np.zeros_like(w, dtype=complex)
        for n in range(self.nterms):
            c = (-1) ** n * q ** (n * (n + 1))
            f = 2 * n + 1
            e = np.exp(1j * f * w)
            em = 1.0 / e
            out += c * ((1j * f) ** deriv * e - (-1j * f) ** deriv * em)
        return out

    def __call__(self, z):
        w, m, k = self._reduce(z)
        sign = np.where((m + k) % 2 == 0, 1.0, -1.0)
        factor = np.exp(-2j * k * w - 1j * k * k * self.period)
        return sign * factor * self._series(w)

    def logderiv(self, z):
        """theta'(z) / theta(z)."""
        w, _, k = self._reduce(z)
        return self._series(w, 1) / self._series(w) - 2j * k

    def deriv(self, z, order: int = 1):
        """Derivatives at points of the base strip (no reduction)."""
        return self._series(np.asarray(z, dtype=complex), order)

    def prime0(self) -> complex:
        return complex(self._series(np.zeros(1, dtype=complex), 1)[0])

    def wp(self, z):
        """Weierstrass p for the lattice pi Z + pi tau Z."""
        w, _, _ = self._reduce(z)
        t0 = self._series(w)
        t1 = self._series(w, 1)
        t2 = self._series(w, 2)
        c = self._series(np.zeros(1, dtype=complex), 3)[0] / (3 * self._series(np.zeros(1, dtype=complex), 1)[0])
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (t1 / t0) ** 2 - t2 / t0 + c
        return np.where(np.abs(t0) < 1e-300, POLE, out)


def theta(z, tau):
    return Theta.make(tau)(z)


# ---------------------------------------------------------------------------
# uniformization


def _poly(c: list, x):
    acc = 0
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _dpoly(c: list) -> list:
    return [k * c[k] for k in range(1, len(c))]


def _pole_safe_ratio(num, den, tiny):
    den = np.asarray(den, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.asarray(num, dtype=complex) / den
    return np.where(np.abs(den) < tiny, POLE, out)


@dataclass(frozen=True)
class _Branch:
    """x = root + D'(root) / (wp - D''(root)/6), or (3 wp - c2)/(3 c3) at infinity."""

    root: float | None
    d1: float
    d2: float
    c2: float
    c3: float

    @classmethod
    def make(cls, coeffs: list, root) -> _Branch:
        c = [float(to_mpf(v)) for v in coeffs]
        if root == INF:
            return cls(None, 0.0, 0.0, c[2], c[3])
        r = float(root)
        return cls(r, _poly(_dpoly(c), r), _poly(_dpoly(_dpoly(c)), r), c[2], c[3])

    def __call__(self, wp, tiny: float = 1e-300):
        wp = np.asarray(wp, dtype=complex)
        finite = np.isfinite(wp)
        if self.root is None:
            with np.errstate(invalid="ignore"):
                out = (3 * wp - self.c2) / (3 * self.c3)
            return np.where(finite, out, POLE)
        out = self.root + _pole_safe_ratio(self.d1, wp - self.d2 / 6, tiny)
        return np.where(finite, out, self.root + 0j)


@dataclass
class EllipticContext:
    """Numerical uniformization of the kernel curve at fixed t."""

    kn: KernelNumerics
    tau: complex
    gamma: complex
    th: Theta
    th2: Theta
    scale: complex
    xb: _Branch
    yb: _Branch
    alpha: complex = 0j
    beta: complex = 0j
    delta: complex = 0j
    epsilon: complex = 0j
    x_c: complex = 0j
    y_c: complex = 0j
    omega_c: complex = 0j
    z_ref: complex = 0j
    double: set[str] = field(default_factory=set)
    notes: list[str] = field(default_factory=list)

    # --- basic functions -------------------------------------------------

    @property
    def pitau(self) -> complex:
        return np.pi * self.tau

    @property
    def w_period(self) -> complex:
        """The second period 2 pi tau - 2 gamma of W."""
        return 2 * self.pitau - 2 * self.gamma

    def _wp(self, u):
        p = self.th.wp(u)
        with np.errstate(invalid="ignore"):
            return np.where(np.isfinite(p), self.scale * p, POLE)

    def X(self, z):
        return self.xb(self._wp(np.asarray(z, dtype=complex) + self.pitau / 2 + self.gamma / 2))

    def Y(self, z):
        return self.yb(self._wp(np.asarray(z, dtype=complex) + self.pitau / 2 - self.gamma / 2))

    def XY(self, z):
        return self.X(z), self.Y(z)

    def kernel_residual(self, z):
        """|t P(X, Y) - 1| at z."""
        x, y = self.XY(z)
        t = float(to_mpf(self.kn.t))
        acc = 0j
        for (a, b), w in self.kn.steps.weights:
            acc = acc + float(w) * x**a * y**b
        return np.abs(t * acc - 1)

    def Xj(self, j: int, z):
        r = j % 4
        if r == 0:
            return self.X(z)
        if r == 1:
            return self.Y(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = self.X(z) if r == 2 else self.Y(z)
            return np.where(np.isinf(v), 0j, 1 / v)

    def Yj(self, j: int, z):
        return self.Xj(j + 1, z)

    def alpha_j(self, j: int) -> complex:
        return self.beta_j(j - 1)

    def beta_j(self, j: int) -> complex:
        k, r = divmod(j, 4)
        base = {0: self.beta, 1: self.delta, 2: self.epsilon + self.pitau, 3: self.alpha + self.pitau}[r]
        return base + k * self.pitau

    def gamma_j(self, j: int) -> complex:
        return complex(gamma_j(self.kn, j))

    # --- theta-product forms ---------------------------------------------

    def X_theta(self, z):
        th, g = self.th, self.gamma
        z = np.asarray(z, dtype=complex)
        return self.x_c * th(z - self.alpha) * th(z + g + self.alpha) / (th(z - self.delta) * th(z + g + self.delta))

    def Y_theta(self, z):
        th, g = self.th, self.gamma
        z = np.asarray(z, dtype=complex)
        return self.y_c * th(z - self.beta) * th(z - g + self.beta) / (th(z - self.epsilon) * th(z - g + self.epsilon))

    # --- W -----------------------------------------------------------------

    def _w_parts(self, z):
        z = np.asarray(z, dtype=complex)
        s = self.pitau - self.gamma
        return (z - self.epsilon, z - s + self.epsilon, z - self.delta, z - s + self.delta)

    def W(self, z):
        a, b, c, d = self._w_parts(z)
        t2 = self.th2
        return _pole_safe_ratio(self.omega_c * t2(a) * t2(b), t2(c) * t2(d), 1e-300)

    def W_logderiv(self, z):
        a, b, c, d = self._w_parts(z)
        t2 = self.th2
        return t2.logderiv(a) + t2.logderiv(b) - t2.logderiv(c) - t2.logderiv(d)

    def W_prime(self, z):
        return self.W(z) * self.W_logderiv(z)

    # --- regions -------------------------------------------------------

    def region_class(self, z):
        """Omega index mod 4 from (|X| < 1, |Y| < 1)."""
        ax = np.abs(self.X(z)) < 1
        ay = np.abs(self.Y(z)) < 1
        return np.select([ax & ay, ~ax & ay, ~ax & ~ay], [0, 1, 2], default=3)

    def boundary_gap(self, z):
        return np.minimum(np.abs(np.abs(self.X(z)) - 1), np.abs(np.abs(self.Y(z)) - 1))

    def region_index(self, z: complex, tol: float = 1e-8, steps: int = 400) -> int:
        """Index j with z in Omega_j, unwrapped along a vertical path from ``z_ref``."""
        z = complex(z)
        gap = float(self.boundary_gap(z))
        if gap < tol:
            raise Boundary(z, gap)
        h = self.pitau.imag
        k = round((z.imag - self.z_ref.imag) / h)
        w = z - k * self.pitau
        start = complex(self.z_ref.real + (w.real - self.z_ref.real) % np.pi, self.z_ref.imag)
        end = complex(start.real, w.imag)
        path = start + 1j * np.linspace(0, end.imag - start.imag, steps + 1)
        cls = self.region_class(path)
        idx = 0
        for a, b in zip(cls[:-1], cls[1:]):
            d = ((int(b) - int(a) + 1) % 4) - 1
            if d == 2:
                if steps > 20000:
                    raise EllipticError(f"region unwrap failed near {z}")
                return self.region_index(z, tol, steps * 4)
            idx += d
        return idx + 4 * k

    def region_candidates(self, z: complex, tol: float = 1e-8) -> set[int]:
        """{j} for an interior point; the indices of the adjacent regions for a boundary point."""
        try:
            return {self.region_index(z, tol)}
        except Boundary:
            out = set()
            eta = 1e-4 * self.pitau.imag
            for dz in (1j * eta, -1j * eta, eta + 1j * eta, eta - 1j * eta, -eta + 1j * eta, -eta - 1j * eta):
                try:
                    out.add(self.region_index(z + dz, tol))
                except Boundary:
                    pass
            return out

    def grid(self, nre: int = 64, nim: int = 256, periods: float = 1.0) -> Iterable[tuple[float, float, float, float]]:
        """(Re z, Im z, |X|, |Y|) over one real period and ``periods`` copies of pi tau."""
        h = self.pitau.imag * periods
        re = np.linspace(0, np.pi, nre, endpoint=False)
        im = np.linspace(-h / 2, h / 2, nim)
        Z = re[None, :] + 1j * im[:, None]
        ax = np.abs(self.X(Z))
        ay = np.abs(self.Y(Z))
        for i in range(nim):
            for j in range(nre):
                yield float(re[j]), float(im[i]), float(ax[i, j]), float(ay[i, j])

    def dump_grid(self, path, **kw) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["re", "im", "absX", "absY"])
            for row in self.grid(**kw):
                w.writerow(row)


# ---------------------------------------------------------------------------
# construction


def _newton(f, z0: complex, tol: float = 1e-13, maxit: int = 60) -> complex:
    z = complex(z0)
    h = 1e-7
    for _ in range(maxit):
        fz = complex(f(z))
        d = (complex(f(z + h)) - complex(f(z - h))) / (2 * h)
        if d == 0 or not np.isfinite(d):
            break
        step = fz / d
        z -= step
        if abs(step) < tol:
            return z
    if abs(complex(f(z))) > 1e-8:
        raise EllipticError(f"Newton failed to converge from {z0}, last z={z}")
    return z


def _inv(f):
    def g(z):
        v = np.asarray(f(z), dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = 1 / v
        return np.where(np.isinf(v), 0j, np.where(v == 0, POLE, r))

    return g


def _scalar(f):
    return lambda z: complex(np.asarray(f(z)).reshape(-1)[0])


def _find_zero_in_band(f, lo: float, hi: float, n_re: int = 48, n_im: int = 96) -> complex:
    """Seed by grid minimum of |f| over Re in [0, pi), Im in [lo, hi], then Newton."""
    re = np.linspace(0, np.pi, n_re, endpoint=False)
    im = np.linspace(lo, hi, n_im)
    Z = re[None, :] + 1j * im[:, None]
    vals = np.abs(f(Z))
    i, j = np.unravel_index(np.nanargmin(vals), vals.shape)
    return _newton(_scalar(f), Z[i, j])


def _wrap(z: complex) -> complex:
    return complex(z.real % np.pi, z.imag)


def build_context(kn: KernelNumerics) -> EllipticContext:
    tau = complex(kn.tau)
    gamma = complex(kn.gamma)
    th = Theta.make(tau)
    th2 = Theta.make(2 * tau - 2 * gamma / np.pi)
    scale = complex((mp.pi / kn.omega1) ** 2)
    ctx = EllipticContext(kn, tau, gamma, th, th2, scale, _Branch.make(kn.D, kn.a[3]), _Branch.make(kn.E, kn.b[3]))
    ctx.z_ref = find_reference_point(ctx)
    _locate_special_points(ctx)
    return ctx


def find_reference_point(ctx: EllipticContext, margin: float = 0.0) -> complex:
    """A point on the segment between -gamma/2 and gamma/2 with |X|, |Y| < 1 - margin."""
    g = ctx.gamma.imag
    best, best_v = None, np.inf
    for re in np.linspace(0, np.pi, 9, endpoint=False):
        zs = re + 1j * np.linspace(-g / 2, g / 2, 201)
        v = np.maximum(np.abs(ctx.X(zs)), np.abs(ctx.Y(zs)))
        i = int(np.argmin(v))
        if v[i] < best_v:
            best, best_v = complex(zs[i]), float(v[i])
    if best is None or best_v >= 1 - margin:
        raise EllipticError(f"no point of Omega_0 found between -gamma/2 and gamma/2 (best max|X|,|Y| = {best_v})")
    return best


def _snap_fixed_point(f, z: complex, c: complex, pitau: complex, radius: float = 1e-2):
    """A double root sits at a fixed point c/2 + m pi/2 + k pi tau/2 of z -> c - z."""
    w = z - c / 2
    m = round(w.real / (np.pi / 2))
    k = round(w.imag / (pitau.imag / 2))
    p = c / 2 + m * np.pi / 2 + k * pitau / 2
    p += round((z - p).real / np.pi) * np.pi
    if abs(p - z) < radius and abs(complex(np.asarray(f(p)).reshape(-1)[0])) < 1e-10:
        return p
    return None


def _in_regions(ctx: EllipticContext, z: complex, allowed: set[int]) -> bool:
    return bool(ctx.region_candidates(z) & allowed)


def _locate_special_points(ctx: EllipticContext) -> None:
    h = ctx.pitau.imag
    g = ctx.gamma
    # (function, allowed regions, search band, centre c of the involution z -> c - z)
    specs = {
        "alpha": (ctx.X, {0, -1}, -0.5 * h, 0.25 * h, -g),
        "beta": (ctx.Y, {0, 1}, -0.25 * h, 0.5 * h, g),
        "delta": (_inv(ctx.X), {1, 2}, 0.0, 0.75 * h, -g),
        "epsilon": (_inv(ctx.Y), {-2, -1}, -0.75 * h, 0.0, g),
    }
    for name, (f, allowed, lo, hi, c) in specs.items():
        z = _wrap(_find_zero_in_band(f, lo, hi))
        snapped = _snap_fixed_point(f, z, c, ctx.pitau)
        if snapped is not None:
            z = snapped
            ctx.double.add(name)
        if not _in_regions(ctx, z, allowed):
            # the partner root/pole of the involution may be the one in range
            raise EllipticError(f"{name}={z} not in Omega{sorted(allowed)} (candidates {ctx.region_candidates(z)})")
        setattr(ctx, name, z)
    probe = np.array([0.3 + 0.1j * h, 1.1 - 0.05j * h, 2.0 + 0.2j * h])
    ctx.x_c = _fit_constant(ctx.X(probe) / _theta_quot_x(ctx, probe), "x_c")
    ctx.y_c = _fit_constant(ctx.Y(probe) / _theta_quot_y(ctx, probe), "y_c")
    ctx.omega_c = omega_c(ctx)


def _fit_constant(vals, name: str) -> complex:
    c = complex(np.mean(vals))
    spread = float(np.max(np.abs(vals - c))) / max(abs(c), 1e-300)
    if spread > 1e-6:
        raise EllipticError(f"{name} not constant across probes (relative spread {spread:.1e})")
    return c


def _theta_quot_x(ctx: EllipticContext, z):
    th, g = ctx.th, ctx.gamma
    return th(z - ctx.alpha) * th(z + g + ctx.alpha) / (th(z - ctx.delta) * th(z + g + ctx.delta))


def _theta_quot_y(ctx: EllipticContext, z):
    th, g = ctx.th, ctx.gamma
    return th(z - ctx.beta) * th(z - g + ctx.beta) / (th(z - ctx.epsilon) * th(z - g + ctx.epsilon))


def omega_c(ctx: EllipticContext) -> complex:
    """Constant making W - X pole-free at delta (residue matching)."""
    th, th2 = ctx.th, ctx.th2
    a, d, e, g, pt = ctx.alpha, ctx.delta, ctx.epsilon, ctx.gamma, ctx.pitau
    common = th(d - a) * th(d + g + a) / (th2(d - e) * th2(d - pt + g + e))
    if "delta" not in ctx.double:
        return complex(ctx.x_c * th2.prime0() * th2(2 * d - pt + g) * common / (th.prime0() * th(2 * d + g)))
    ctx.notes.append("double pole of X at delta: degenerate omega_c formula")
    return complex(-np.exp(1j * pt) * ctx.x_c * th2.prime0() ** 2 * common / th.prime0() ** 2)
