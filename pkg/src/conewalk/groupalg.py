"""Group of the walk, orbit sums, and decoupling search.

Group finiteness uses two routes.  The fast route iterates theta = psi o phi on
random points modulo a large prime; if some well-defined point does not return
within k steps then theta^k is not the identity map (a rational map that is the
identity fixes every point where it is defined).  A candidate order found this
way is confirmed by exact symbolic composition.  The slow route composes the
maps symbolically from the start and is kept for cross-checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy as sp
from sympy.polys.matrices import DomainMatrix

from .enumerate import ConeSpec
from .stepset import StepSet, step_polynomials

x, y = sp.symbols("x y")
_GENS = (x, y)

PRIME = (1 << 61) - 1


class GroupError(ValueError):
    pass


class SwellError(RuntimeError):
    pass


@dataclass(frozen=True)
class BiRational:
    """Normalized quotient of two polynomials in x, y over QQ.

    The denominator is made monic in the lex order with the gcd removed, so two
    equal functions have identical (num, den).
    """

    num: sp.Poly
    den: sp.Poly

    @classmethod
    def from_expr(cls, e) -> BiRational:
        n, d = sp.fraction(sp.cancel(sp.together(sp.sympify(e))))
        return cls._normalize(sp.Poly(n, *_GENS, domain="QQ"), sp.Poly(d, *_GENS, domain="QQ"))

    @classmethod
    def _normalize(cls, n: sp.Poly, d: sp.Poly) -> BiRational:
        if d.is_zero:
            raise ZeroDivisionError("zero denominator")
        g = n.gcd(d)
        if not g.is_one:
            n = n.exquo(g)
            d = d.exquo(g)
        lc = d.LC()
        if lc != 1:
            n = n.quo_ground(lc)
            d = d.quo_ground(lc)
        return cls(n, d)

    def as_expr(self):
        return self.num.as_expr() / self.den.as_expr()

    def __add__(self, o: BiRational) -> BiRational:
        return BiRational._normalize(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, o: BiRational) -> BiRational:
        return BiRational._normalize(self.num * o.den - o.num * self.den, self.den * o.den)

    def __neg__(self) -> BiRational:
        return BiRational(-self.num, self.den)

    def __mul__(self, o: BiRational) -> BiRational:
        return BiRational._normalize(self.num * o.num, self.den * o.den)

    def __truediv__(self, o: BiRational) -> BiRational:
        return BiRational._normalize(self.num * o.den, self.den * o.num)

    def __pow__(self, k: int) -> BiRational:
        if k >= 0:
            return BiRational._normalize(self.num**k, self.den**k)
        return BiRational._normalize(self.den ** (-k), self.num ** (-k))

    def is_zero(self) -> bool:
        return self.num.is_zero

    def size(self) -> int:
        return len(self.num.terms()) + len(self.den.terms())

    def compose(self, fx: BiRational, fy: BiRational) -> BiRational:
        """Substitute x -> fx, y -> fy."""
        return _eval_poly_rational(self.num, fx, fy) / _eval_poly_rational(self.den, fx, fy)

    def eval_mod(self, px: int, py: int, mod: int = PRIME) -> int | None:
        d = _poly_mod(self.den, px, py, mod)
        if d == 0:
            return None
        return _poly_mod(self.num, px, py, mod) * pow(d, -1, mod) % mod

    def to_json(self) -> dict:
        def terms(p: sp.Poly):
            return [[list(m), str(c)] for m, c in p.terms()]

        return {"num": terms(self.num), "den": terms(self.den)}

    @classmethod
    def from_json(cls, d: dict) -> BiRational:
        def poly(ts):
            e = sum(sp.Rational(c) * x ** m[0] * y ** m[1] for m, c in ts)
            return sp.Poly(e, *_GENS, domain="QQ")

        return cls._normalize(poly(d["num"]), poly(d["den"]))

    def __str__(self) -> str:
        return str(sp.factor(self.as_expr()))


def _poly_mod(p: sp.Poly, a: int, b: int, mod: int) -> int:
    acc = 0
    for (i, j), c in p.terms():
        c = sp.Rational(c)
        acc += int(c.p) * pow(int(c.q), -1, mod) * pow(a, i, mod) * pow(b, j, mod)
    return acc % mod


def _eval_poly_rational(p: sp.Poly, fx: BiRational, fy: BiRational) -> BiRational:
    """p(fx, fy) as a normalized BiRational, building a single common denominator."""
    terms = p.terms()
    if not terms:
        return BiRational.from_expr(0)
    dx = max(i for (i, _), _ in terms)
    dy = max(j for (_, j), _ in terms)
    num = sp.Poly(0, *_GENS, domain="QQ")
    xs_num = [fx.num**i for i in range(dx + 1)]
    xs_den = [fx.den ** (dx - i) for i in range(dx + 1)]
    ys_num = [fy.num**j for j in range(dy + 1)]
    ys_den = [fy.den ** (dy - j) for j in range(dy + 1)]
    for (i, j), c in terms:
        num += xs_num[i] * xs_den[i] * ys_num[j] * ys_den[j] * c
    den = fx.den**dx * fy.den**dy
    return BiRational._normalize(num, den)


Pair = tuple[BiRational, BiRational]


def _lpoly(d: dict[int, Fraction], var) -> sp.Expr:
    return sum(sp.Rational(c.numerator, c.denominator) * var**k for k, c in d.items())


def group_generators(s: StepSet) -> tuple[Pair, Pair]:
    """psi(x, y) = (x, A_-1(x)/(A_1(x) y)) and phi(x, y) = (B_-1(y)/(B_1(y) x), y)."""
    sp_ = step_polynomials(s)
    if not sp_.A_1 or not sp_.A_minus1 or not sp_.B_1 or not sp_.B_minus1:
        raise GroupError("A_1, A_-1, B_1 or B_-1 vanishes; generators undefined")
    X = BiRational.from_expr(x)
    Y = BiRational.from_expr(y)
    psi = (X, BiRational.from_expr(_lpoly(sp_.A_minus1, x) / (_lpoly(sp_.A_1, x) * y)))
    phi = (BiRational.from_expr(_lpoly(sp_.B_minus1, y) / (_lpoly(sp_.B_1, y) * x)), Y)
    return psi, phi


def compose(g: Pair, h: Pair) -> Pair:
    """(g o h)(x, y) = g(h(x, y))."""
    return g[0].compose(*h), g[1].compose(*h)


def identity_pair() -> Pair:
    return BiRational.from_expr(x), BiRational.from_expr(y)


def step_P(s: StepSet) -> BiRational:
    return BiRational.from_expr(sum(sp.Rational(w.numerator, w.denominator) * x**i * y**j for (i, j), w in s.weights))


@dataclass(frozen=True)
class Finite:
    order: int


@dataclass(frozen=True)
class ExceedsBound:
    bound: int


@dataclass
class GroupReport:
    status: Finite | ExceedsBound
    psi: Pair
    phi: Pair
    orbit: list[Pair] = field(default_factory=list)
    signs: list[int] = field(default_factory=list)
    method: str = "modular"
    evidence: dict = field(default_factory=dict)

    @property
    def is_finite(self) -> bool:
        return isinstance(self.status, Finite)

    def to_json(self) -> dict:
        st = self.status
        return {
            "status": "Finite" if isinstance(st, Finite) else "ExceedsBound",
            "order": st.order if isinstance(st, Finite) else None,
            "bound": st.bound if isinstance(st, ExceedsBound) else None,
            "method": self.method,
            "evidence": self.evidence,
        }


def _theta_mod(s: StepSet, mod: int = PRIME):
    """theta = psi o phi as a map on (Z/mod)^2, returning None at poles."""
    sp_ = step_polynomials(s)

    def lp(d, v):
        acc = 0
        for k, c in d.items():
            ck = c.numerator * pow(c.denominator, -1, mod)
            acc += ck * (pow(v, k, mod) if k >= 0 else pow(pow(v, -k, mod), -1, mod))
        return acc % mod

    def theta(px: int, py: int):
        if px == 0 or py == 0:
            return None
        b1 = lp(sp_.B_1, py)
        if b1 == 0:
            return None
        x1 = lp(sp_.B_minus1, py) * pow(b1 * px % mod, -1, mod) % mod
        if x1 == 0:
            return None
        a1 = lp(sp_.A_1, x1)
        if a1 == 0:
            return None
        y1 = lp(sp_.A_minus1, x1) * pow(a1 * py % mod, -1, mod) % mod
        if y1 == 0:
            return None
        return x1, y1

    return theta


def _modular_return_time(s: StepSet, bound: int, samples: int, rng: random.Random) -> tuple[int | None, dict]:
    theta = _theta_mod(s)
    times = []
    witnesses = []
    tries = 0
    while len(times) < samples and tries < 50 * samples:
        tries += 1
        start = (rng.randrange(2, PRIME - 1), rng.randrange(2, PRIME - 1))
        pt = start
        k = 0
        ok = True
        while k < bound:
            pt = theta(*pt)
            k += 1
            if pt is None:
                ok = False
                break
            if pt == start:
                break
        if not ok:
            continue
        if pt == start:
            times.append(k)
        else:
            witnesses.append([str(start[0]), str(start[1])])
            return None, {"prime": str(PRIME), "non_return_witness": witnesses[-1], "iterations": bound}
    if not times:
        raise GroupError("no well-defined sample point found")
    k = 0
    for tk in times:
        k = tk if k == 0 else k * tk // _gcd(k, tk)
    return k, {"prime": str(PRIME), "return_times": times}


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _orbit(psi: Pair, phi: Pair, k: int, cap: int) -> tuple[list[Pair], list[int]]:
    theta = compose(psi, phi)
    g = identity_pair()
    orbit, signs = [], []
    for _ in range(k):
        orbit.append(g)
        signs.append(1)
        orbit.append(compose(psi, g))
        signs.append(-1)
        g = compose(theta, g)
        if g[0].size() + g[1].size() > cap:
            raise SwellError(f"orbit element exceeded {cap} monomials")
    return orbit, signs


def group_order(s: StepSet, bound: int = 200, *, seed: int = 0, samples: int = 3, swell_cap: int = 10_000) -> GroupReport:
    """Order of the group generated by psi and phi (2k when theta has order k)."""
    psi, phi = group_generators(s)
    rng = random.Random(seed)
    k, ev = _modular_return_time(s, bound, samples, rng)
    if k is None:
        return GroupReport(ExceedsBound(bound), psi, phi, evidence=ev)
    theta = compose(psi, phi)
    g = identity_pair()
    for _ in range(k):
        g = compose(theta, g)
        if g[0].size() + g[1].size() > swell_cap:
            raise SwellError(f"theta power exceeded {swell_cap} monomials")
    if g != identity_pair():
        raise GroupError(f"modular return time {k} not confirmed symbolically")
    orbit, signs = _orbit(psi, phi, k, swell_cap)
    ev["symbolic_identity_confirmed"] = True
    return GroupReport(Finite(2 * k), psi, phi, orbit, signs, "modular+symbolic", ev)


def group_order_symbolic(s: StepSet, bound: int, swell_cap: int = 10_000) -> GroupReport:
    """Iterate theta by exact composition only (slow; small bounds)."""
    psi, phi = group_generators(s)
    theta = compose(psi, phi)
    ident = identity_pair()
    g = ident
    for k in range(1, bound + 1):
        g = compose(theta, g)
        if g == ident:
            orbit, signs = _orbit(psi, phi, k, swell_cap)
            return GroupReport(Finite(2 * k), psi, phi, orbit, signs, "symbolic")
        if g[0].size() + g[1].size() > swell_cap:
            raise SwellError(f"theta^{k} exceeded {swell_cap} monomials")
    return GroupReport(ExceedsBound(bound), psi, phi, method="symbolic")


def orbit_sum(s: StepSet, p: int, q: int, report: GroupReport | None = None) -> BiRational:
    """Sum of sign(g) (x^p y^q) o g over the finite group."""
    rep = report or group_order(s)
    if not rep.is_finite:
        raise GroupError("orbit sum undefined for a group not found finite")
    acc = BiRational.from_expr(0)
    for (gx, gy), sg in zip(rep.orbit, rep.signs):
        term = gx**p * gy**q
        acc = acc + term if sg > 0 else acc - term
    return acc


# ---------------------------------------------------------------------------
# Decoupling
# ---------------------------------------------------------------------------


@dataclass
class DecouplingCertificate:
    p: int
    q: int
    R1: dict[str, str]  # t-sample -> expression in x
    R2: dict[str, str]  # t-sample -> expression in y
    Q: dict[str, str]  # t-sample -> witness multiplier
    degree_bound: int
    t_samples: list[Fraction]
    orientation: str
    trivial: bool = False
    t_dependent: bool = False

    def to_json(self) -> dict:
        return {
            "found": True,
            "p": self.p,
            "q": self.q,
            "R1": self.R1,
            "R2": self.R2,
            "Q": self.Q,
            "degree_bound": self.degree_bound,
            "t_samples": [str(t) for t in self.t_samples],
            "orientation": self.orientation,
            "trivial": self.trivial,
            "t_dependent": self.t_dependent,
        }


@dataclass
class NotFoundUpTo:
    degree_bound: int
    t_samples: list[Fraction]
    mixed: bool = False  # found at some samples but not all
    per_sample: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "found": False,
            "degree_bound": self.degree_bound,
            "t_samples": [str(t) for t in self.t_samples],
            "t_dependent_inconsistent": self.mixed,
            "per_sample": self.per_sample,
        }


def kernel_numerator(s: StepSet, t) -> sp.Poly:
    """x y (t P(x, y) - 1) as a polynomial (small steps need exactly x y)."""
    e = sp.expand(x * y * (t * step_P(s).as_expr() - 1))
    return sp.Poly(e, *_GENS, domain="QQ")


def default_t_samples(s: StepSet, count: int = 3, seed: int = 0) -> list[Fraction]:
    rng = random.Random(seed)
    top = Fraction(1) / s.total_weight()
    out: list[Fraction] = []
    while len(out) < count:
        den = rng.randrange(7, 60)
        t = Fraction(rng.randrange(1, den), den) * top
        if 0 < t < top and t not in out:
            out.append(t)
    return sorted(out)


def _reduce_powers(s: StepSet, t: Fraction, d: int, swap: bool):
    """y^k = a_k(x) + b_k(x) y modulo the kernel, for -d <= k <= d (fraction field)."""
    from sympy.polys.fields import field as make_field

    F, X = make_field("x", sp.QQ)
    sp_ = step_polynomials(s.mirror() if swap else s)

    def lp(dct):
        acc = F(0)
        for k, c in dct.items():
            acc += sp.Rational(c.numerator, c.denominator) * X**k
        return acc

    tt = sp.Rational(t.numerator, t.denominator)
    c2 = tt * lp(sp_.A_1)  # t A_1 y^2 + (t A_0 - 1) y + t A_-1 = 0
    c1 = tt * lp(sp_.A_0) - 1
    c0 = tt * lp(sp_.A_minus1)
    pw = {0: (F(1), F(0)), 1: (F(0), F(1))}
    for k in range(1, d):
        a, b = pw[k]
        # y^{k+1} = a y + b y^2 with y^2 = -(c1 y + c0)/c2
        pw[k + 1] = (-b * c0 / c2, a - b * c1 / c2)
    for k in range(0, -d, -1):
        a, b = pw[k]
        # y^{-1} = -(c2 y + c1)/c0, so y^{k-1} = a y^{-1} + b
        pw[k - 1] = (b - a * c1 / c0, -a * c2 / c0)
    return F, X, pw


def _solve_one(s: StepSet, p: int, q: int, t: Fraction, d: int, swap: bool):
    """Try x^p y^q = R1(x) + R2(y) with R2 a Laurent polynomial of span [-d, d]."""
    pp, qq = (q, p) if swap else (p, q)
    F, X, pw = _reduce_powers(s, t, max(d, abs(qq)), swap)
    ks = [k for k in range(-d, d + 1) if k != 0]
    a_t, b_t = pw[qq]
    target = X**pp * b_t
    cols = [pw[k][1] for k in ks]
    den = target.denom
    for c in cols:
        den = den.lcm(c.denom)
    rows: dict[int, list] = {}
    nums = [(c * den).numer for c in cols]
    tnum = (target * den).numer
    for idx, n in enumerate(nums):
        for (e,), coeff in n.terms():
            rows.setdefault(e, [sp.Rational(0)] * (len(ks) + 1))[idx] = coeff
    for (e,), coeff in tnum.terms():
        rows.setdefault(e, [sp.Rational(0)] * (len(ks) + 1))[len(ks)] = coeff
    if not rows:
        sol = [sp.Rational(0)] * len(ks)
    else:
        mat = DomainMatrix([[sp.QQ.convert(v) for v in r] for r in rows.values()], (len(rows), len(ks) + 1), sp.QQ)
        rref, pivots = mat.rref()
        if len(ks) in pivots:
            return None
        sol = [sp.QQ(0)] * len(ks)
        rr = rref.to_Matrix()
        for ri, pc in enumerate(pivots):
            sol[pc] = rr[ri, len(ks)]
    R1f = X**pp * a_t
    for k, c in zip(ks, sol):
        if c:
            R1f -= sp.Rational(c) * pw[k][0]
    xs = sp.Symbol("x")
    R1 = sp.cancel(R1f.as_expr().subs(sp.Symbol("x"), xs))
    R2 = sum(sp.Rational(c) * y**k for k, c in zip(ks, sol) if c)
    if swap:  # undo the mirror: roles of x and y are exchanged
        R1, R2 = R2.subs(y, x), R1.subs(x, y)
    return sp.sympify(R1), sp.sympify(R2)


def verify_decoupling(s: StepSet, p: int, q: int, R1, R2, t: Fraction):
    """Exact divisibility of numer(x^p y^q - R1 - R2) by the kernel numerator."""
    tt = sp.Rational(t.numerator, t.denominator)
    expr = sp.together(x**p * y**q - R1 - R2)
    num, _ = sp.fraction(expr)
    kn = kernel_numerator(s, tt)
    qpoly, rem = sp.div(sp.Poly(num, *_GENS, domain="QQ"), kn)
    return rem.is_zero, qpoly


def decoupling_search(
    s: StepSet,
    p: int,
    q: int,
    degree_bound: int = 12,
    t_samples: Sequence[Fraction] | None = None,
) -> DecouplingCertificate | NotFoundUpTo:
    ts = list(t_samples) if t_samples is not None else default_t_samples(s)
    if q == 0 or p == 0:
        R1 = x**p if q == 0 else sp.Integer(0)
        R2 = sp.Integer(0) if q == 0 else y**q
        qs = {}
        for t in ts:
            ok, Qp = verify_decoupling(s, p, q, R1, R2, t)
            assert ok
            qs[str(t)] = str(Qp.as_expr())
        return DecouplingCertificate(
            p, q, {str(t): str(R1) for t in ts}, {str(t): str(R2) for t in ts}, qs, degree_bound, ts, "trivial", True
        )
    for swap in (False, True):
        found: dict[str, tuple] = {}
        per: dict[str, bool] = {}
        for t in ts:
            sol = _solve_one(s, p, q, t, degree_bound, swap)
            per[str(t)] = sol is not None
            if sol is None:
                continue
            R1, R2 = sol
            ok, Qp = verify_decoupling(s, p, q, R1, R2, t)
            if not ok:
                raise AssertionError("decoupling solution failed exact verification")
            found[str(t)] = (R1, R2, Qp)
        if len(found) == len(ts):
            R1s = {k: str(v[0]) for k, v in found.items()}
            R2s = {k: str(v[1]) for k, v in found.items()}
            dep = len(set(R1s.values())) > 1 or len(set(R2s.values())) > 1
            return DecouplingCertificate(
                p,
                q,
                R1s,
                R2s,
                {k: str(v[2].as_expr()) for k, v in found.items()},
                degree_bound,
                ts,
                "R2 Laurent in y" if not swap else "R1 Laurent in x",
                False,
                dep,
            )
        if found:
            return NotFoundUpTo(degree_bound, ts, mixed=True, per_sample=per)
    return NotFoundUpTo(degree_bound, ts, per_sample=per)


# ---------------------------------------------------------------------------
# M-quadrant cones
# ---------------------------------------------------------------------------


@dataclass
class MQCOrbitData:
    M: int
    L: int
    K: int
    p: int
    q: int
    parity_zero: bool | None  # even M: E~ vanishes iff start on the lower boundary axis
    boundary_axis: str | None
    delegated_orbit_sum: BiRational | None  # odd M: E~ equals the orbit sum

    def to_json(self) -> dict:
        return {
            "M": self.M,
            "L": self.L,
            "K": self.K,
            "p": self.p,
            "q": self.q,
            "E_tilde_zero": self.parity_zero,
            "boundary_axis": self.boundary_axis,
            "orbit_sum": None if self.delegated_orbit_sum is None else str(self.delegated_orbit_sum),
        }


def boundary_axis(cone: ConeSpec) -> str:
    """Axis carrying the two boundary rays of an even cone: the x-axis iff L is even."""
    return "x" if cone.L % 2 == 0 else "y"


def mqc_orbit_objects(s: StepSet, cone: ConeSpec, report: GroupReport | None = None) -> MQCOrbitData:
    p, q = cone.start
    if cone.M % 2 == 0:
        axis = boundary_axis(cone)
        zero = (q == 0) if axis == "x" else (p == 0)
        return MQCOrbitData(cone.M, cone.L, cone.K, p, q, zero, axis, None)
    rep = report or group_order(s)
    osum = orbit_sum(s, p, q, rep) if rep.is_finite else None
    return MQCOrbitData(cone.M, cone.L, cone.K, p, q, None if osum is None else osum.is_zero(), None, osum)
