"""Numeric data of the kernel curve at a fixed t: branch points, periods, tau, gamma.

Periods are computed after the substitution x = 1 + 1/s, which sends every
integration path (including the ones passing through infinity) to a bounded
s-interval between two roots of Dhat(s) = s^4 D(1 + 1/s).  The inverse
square-root endpoint singularities are removed analytically before quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .enumerate import ConeSpec
from .stepset import StepPolynomials, StepSet, step_polynomials

INF = mp.inf


class KernelError(ValueError):
    pass


def to_mpf(v) -> mp.mpf:
    if isinstance(v, (Fraction, int)):
        v = Fraction(v)
        return mp.mpf(v.numerator) / v.denominator
    return mp.mpf(v)


def _tval(t):
    return t if isinstance(t, (Fraction, int)) else mp.mpf(t)


def _poly_mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        for j, v in enumerate(b):
            out[i + j] += u * v
    return out


def _shifted(d: dict[int, Fraction]) -> list:
    """Coefficients of x * A(x) for a Laurent polynomial A with exponents in {-1,0,1}."""
    return [d.get(-1, 0), d.get(0, 0), d.get(1, 0)]


def _discriminant(m1: dict, m0: dict, p1: dict, t) -> list:
    """x^2((A_0 - 1/t)^2 - 4 A_-1 A_1) as coefficients alpha_0..alpha_4."""
    a0 = _shifted(m0)
    a0[1] -= 1 / t if not isinstance(t, (Fraction, int)) else Fraction(1) / t
    sq = _poly_mul(a0, a0)
    cross = _poly_mul(_shifted(m1), _shifted(p1))
    return [sq[i] - 4 * cross[i] for i in range(5)]


def kernel_discriminants(s: StepSet, t) -> tuple[list, list]:
    tt = _tval(t)
    if not (0 < tt < 1 / s.total_weight()):
        raise KernelError(f"t={t} outside (0, 1/P(1,1))")
    sp_ = step_polynomials(s)
    D = _discriminant(sp_.A_minus1, sp_.A_0, sp_.A_1, tt)
    E = _discriminant(sp_.B_minus1, sp_.B_0, sp_.B_1, tt)
    return D, E


def _peval(c: list, x):
    acc = 0
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _mpc(c: list) -> list:
    return [to_mpf(v) for v in c]


def _polish(c: list, r, others: list):
    """Newton steps from r, discarded if they drift towards another root."""
    dc = [j * c[j] for j in range(1, len(c))]
    gap = min((abs(r - o) for o in others if o is not r), default=mp.mpf(1))
    z = r
    for _ in range(8):
        d = _peval(dc, z)
        if d == 0:
            break
        z = z - _peval(c, z) / d
    return z if abs(z - r) < gap / 4 else r


def branch_points(D: list, *, tol: float = 1e-20) -> list:
    """Roots a_1 < a_2 < a_3 and a_4 (possibly infinite) of the discriminant."""
    c = _mpc(D)
    deg = 4
    while deg > 0 and c[deg] == 0:
        deg -= 1
    if deg < 3:
        raise KernelError("discriminant has degree < 3; step set singular?")
    roots = mp.polyroots(list(reversed(c[: deg + 1])), maxsteps=200, extraprec=2 * mp.mp.prec)
    real = []
    for r in roots:
        if abs(mp.im(r)) > mp.mpf(10) ** (-mp.mp.dps // 2):
            raise KernelError(f"non-real branch point {r}")
        real.append(mp.re(r))
    polished = [_polish(c, r, real) for r in real]
    inner = sorted(r for r in polished if -1 < r < 1)
    outer = sorted(r for r in polished if r > 1)
    neg = [r for r in polished if r < -1]
    if len(inner) != 2 or not outer:
        raise KernelError(f"branch points {polished} violate -1<a1<a2<1<a3")
    a1, a2 = inner
    a3 = outer[0]
    if deg == 3:
        if len(outer) != 1 or neg:
            raise KernelError("cubic discriminant with unexpected roots")
        a4 = INF
    elif len(outer) == 2:
        a4 = outer[1]
    elif len(neg) == 1:
        a4 = neg[0]
    else:
        raise KernelError(f"cannot place a4 among {polished}")
    for a, lo, hi in ((a1, -1, a2), (a2, a1, 1), (a3, 1, a3 + 1)):
        eps = mp.mpf(10) ** (-mp.mp.dps // 3)
        if _peval(c, a - eps) * _peval(c, a + eps) > 0:
            raise KernelError(f"no sign change of D at {a}")
    return [a1, a2, a3, a4]


def _dhat(c: list):
    """Coefficients of s^4 D(1 + 1/s) (ascending in s)."""
    out = [mp.mpf(0)] * 5
    for j, a in enumerate(c):
        # a (1+s)^j s^{4-j}
        for k in range(j + 1):
            out[4 - j + k] += a * mp.binomial(j, k)
    return out


def _s_of(x) -> mp.mpf:
    return mp.mpf(0) if x == INF else 1 / (x - 1)


def double_root_x(sp_: StepPolynomials, t, b4):
    """The x with K(x, b4) = 0 at the branch point b4 (a double root)."""
    tt = to_mpf(t)
    if b4 == INF:
        # double root of x A_1(x) = c0 + c1 x + c2 x^2
        c2 = sp_.A_1.get(1, 0)
        if c2 == 0:
            return INF
        return -to_mpf(sp_.A_1.get(0, 0)) / (2 * to_mpf(c2))

    def lp(d):
        return sum(to_mpf(v) * b4**k for k, v in d.items())

    B1 = lp(sp_.B_1)
    if abs(B1) < mp.mpf(10) ** (-mp.mp.dps // 2):
        return INF
    return -(lp(sp_.B_0) - 1 / tt) / (2 * B1)


def _deflate(c: list, r) -> list:
    """Ascending coefficients of c(u) / (u - r), remainder dropped."""
    n = len(c) - 1
    out = [mp.mpf(0)] * n
    acc = mp.mpf(0)
    for k in range(n, 0, -1):
        acc = c[k] + r * acc
        out[k - 1] = acc
    return out


def _sqrt_integral(h: list, a, b, sign: int, a_root: bool, b_root: bool):
    """Integral of 1/sqrt(sign h(u)) from a to b, where a and/or b are simple roots of h.

    The root factors are divided out and the square-root endpoint behaviour is
    removed by u = a + (b-a) sin^2(th) (both ends) or u = end -/+ (b-a) v^2,
    leaving a smooth integrand that tanh-sinh handles to working precision.
    """
    if a > b:
        return -_sqrt_integral(h, b, a, sign, b_root, a_root)
    w = b - a
    if a_root and b_root:
        g = _deflate(_deflate(h, a), b)
        # sign h = (u - a)(b - u) (-sign g)
        f = lambda th: 2 / mp.sqrt(-sign * _peval(g, a + w * mp.sin(th) ** 2))  # noqa: E731
        return mp.quad(f, [0, mp.pi / 2])
    if b_root:
        g = _deflate(h, b)
        f = lambda v: 1 / mp.sqrt(-sign * _peval(g, b - w * v * v))  # noqa: E731
        return 2 * mp.sqrt(w) * mp.quad(f, [0, 1])
    if a_root:
        g = _deflate(h, a)
        f = lambda v: 1 / mp.sqrt(sign * _peval(g, a + w * v * v))  # noqa: E731
        return 2 * mp.sqrt(w) * mp.quad(f, [0, 1])
    raise KernelError("period integral needs a branch point at one end")


def compute_periods(D: list, a: list, x4) -> tuple[mp.mpc, mp.mpf, mp.mpf]:
    c = _mpc(D)
    h = _dhat(c)
    s1, _, s3, s4 = (_s_of(v) for v in a)
    sx = _s_of(x4)
    w1 = mp.mpc(0, 1) * _sqrt_integral(h, s4, s3, -1, True, True)
    w2 = _sqrt_integral(h, s1, s4, 1, True, True)
    if not (s1 <= sx <= s4):
        raise KernelError(f"x4={x4} is not on the path from a4 to a1")
    w3 = _sqrt_integral(h, sx, s4, 1, sx == s4 or sx == s1, True)
    return w1, mp.re(w2), mp.re(w3)


@dataclass
class KernelNumerics:
    steps: StepSet
    t: object
    dps: int
    D: list
    E: list
    a: list
    b: list
    x4: object
    omega1: mp.mpc
    omega2: mp.mpf
    omega3: mp.mpf
    notes: list[str] = field(default_factory=list)

    @property
    def tau(self) -> mp.mpc:
        return -self.omega2 / self.omega1

    @property
    def gamma(self) -> mp.mpc:
        return -self.omega3 * mp.pi / (2 * self.omega1)

    @property
    def ratio(self) -> mp.mpf:
        """gamma / (pi tau) = omega3 / (2 omega2)."""
        return self.omega3 / (2 * self.omega2)

    @property
    def nome_gamma(self) -> mp.mpf:
        """q = e^{i gamma} (real, in (0,1))."""
        return mp.re(mp.exp(1j * self.gamma))

    def to_json(self) -> dict:
        def f(v):
            return "inf" if v == INF else float(v)

        return {
            "t": str(self.t),
            "a": [f(v) for v in self.a],
            "b": [f(v) for v in self.b],
            "x4": f(self.x4),
            "omega1_im": float(mp.im(self.omega1)),
            "omega2": float(self.omega2),
            "omega3": float(self.omega3),
            "tau_im": float(mp.im(self.tau)),
            "gamma_im": float(mp.im(self.gamma)),
            "ratio": float(self.ratio),
            "dps": self.dps,
            "notes": self.notes,
        }


def kernel_numerics(s: StepSet, t, dps: int = 30) -> KernelNumerics:
    with mp.workdps(dps):
        D, E = kernel_discriminants(s, t)
        a = branch_points(D)
        b = branch_points(E)
        sp_ = step_polynomials(s)
        x4 = double_root_x(sp_, t, b[3])
        w1, w2, w3 = compute_periods(D, a, x4)
        notes = [f"x4 from the double root of K(x, b4) = 0, x4={mp.nstr(x4, 12)}"]
        if not (0 < w3 < w2):
            raise KernelError(f"period ordering 0<omega3<omega2 fails: {w3}, {w2}")
        return KernelNumerics(s, t, dps, D, E, a, b, x4, w1, w2, w3, notes)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rational:
    value: Fraction
    heuristic: bool = True


@dataclass(frozen=True)
class IrrationalLooking:
    best: Fraction
    error: float
    heuristic: bool = True


def ratio_detect(r, max_den: int = 64, tol: float = 1e-8) -> Rational | IrrationalLooking:
    """Continued-fraction scan for p/q with q <= max_den within tol (heuristic)."""
    fr = Fraction(mp.nstr(mp.mpf(r), 40)) if not isinstance(r, float) else Fraction(r)
    best = fr.limit_denominator(max_den)
    err = abs(float(fr - best))
    if err <= tol:
        return Rational(best)
    return IrrationalLooking(best, err)


@dataclass
class ConeAngles:
    gammas: dict[int, mp.mpc]
    tau_hat: mp.mpc
    tau: mp.mpc

    @property
    def tau_hat_over_tau(self) -> mp.mpc:
        return self.tau_hat / self.tau


def gamma_j(kn: KernelNumerics, j: int) -> mp.mpc:
    """gamma_{2k} = gamma + k pi tau and gamma_{2k-1} = -gamma + k pi tau."""
    if j % 2 == 0:
        return kn.gamma + (j // 2) * mp.pi * kn.tau
    return -kn.gamma + ((j + 1) // 2) * mp.pi * kn.tau


def cone_angles(kn: KernelNumerics, cone: ConeSpec) -> ConeAngles:
    js = range(-cone.L - 1, cone.K + 1)
    g = {j: gamma_j(kn, j) for j in js}
    tau_hat = (g[cone.K] - g[-cone.L - 1]) / mp.pi
    return ConeAngles(g, tau_hat, kn.tau)
