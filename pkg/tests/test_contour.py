from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import integers, sampled_from

from conewalk.contour import (
    ContourError,
    ContourIntegrator,
    ContourSpec,
    SeriesOracle,
    characterization_checks,
    default_spec,
    find_base_point,
    sample_region,
    verify_integral,
)
from conewalk.elliptic import EllipticContext, build_context
from conewalk.enumerate import ConeSpec, count_cone
from conewalk.kernelnum import kernel_numerics
from conewalk.stepset import parse_stepset

WEIGHTED = "E:2,W:1/2,N,S:1/2,SE:1/4"


@lru_cache(maxsize=None)
def ctx_for(code: str, t: Fraction = Fraction(1, 10)) -> EllipticContext:
    return build_context(kernel_numerics(parse_stepset(code), t))


@lru_cache(maxsize=None)
def integrator(code: str, p: int = 1, q: int = 1, t: Fraction = Fraction(1, 10)) -> ContourIntegrator:
    ctx = ctx_for(code, t)
    return ContourIntegrator(ctx, p, q, default_spec(ctx))


def exact_F(code: str, t: Fraction, start=(1, 1), N: int = 60) -> float:
    """F(t) from enumeration in exact arithmetic; the tail is far below double precision."""
    F = count_cone(parse_stepset(code), ConeSpec.three_quadrant(start), N).F()
    return float(sum(v * t**n for (n, _, _), v in F.items()))


class TestBasePoint:
    @pytest.mark.parametrize("code", ["N,S,E,W", WEIGHTED, "N,NW,W,SW,E", "N,W,SE"])
    def test_line_in_omega0(self, code: str) -> None:
        ctx = ctx_for(code)
        z0 = find_base_point(ctx)
        line = z0 + np.linspace(0, np.pi, 257)
        assert all(ctx.region_index(z) == 0 for z in line[::16])
        assert ctx.region_index(z0 + np.pi) == 0
        assert np.max(np.maximum(np.abs(ctx.X(line)), np.abs(ctx.Y(line)))) < 1


class TestIntegrals:
    @pytest.mark.parametrize("code", ["N,S,E,W", WEIGHTED, "E,N,SW", "N,NW,W,SW,E"])
    def test_F_against_enumeration(self, code: str) -> None:
        v = integrator(code).F()
        assert abs(v.value.imag) < 1e-12
        assert abs(v.value.real - exact_F(code, Fraction(1, 10))) < 1e-11

    def test_simple_F_frozen(self) -> None:
        # sum_n [t^n]F t^n at t = 1/10 from the exact enumeration, frozen
        assert abs(integrator("N,S,E,W").F().value.real - 0.02154566139789757) < 1e-14

    def test_t_factor_fails(self) -> None:
        ctx = ctx_for("N,S,E,W")
        spec = ContourSpec(find_base_point(ctx), t_factor=True)
        v = ContourIntegrator(ctx, 1, 1, spec).F().value.real
        assert abs(v - exact_F("N,S,E,W", Fraction(1, 10))) > 0.1

    @pytest.mark.parametrize("code", ["N,S,E,W", WEIGHTED])
    def test_verify_integral(self, code: str) -> None:
        rep = verify_integral(ctx_for(code), 1, 1, 30, n_points=5, seed=0)
        assert rep.ok, rep.to_json()
        assert len(rep.comparisons) == 11

    @given(code=sampled_from(["N,S,E,W", "E,N,SW", "N,NW,W,SW,E"]), p=integers(1, 3), q=integers(1, 3), seed=integers(0, 99))
    def test_random_starts(self, *, code: str, p: int, q: int, seed: int) -> None:
        ctx = ctx_for(code)
        ci = integrator(code, p, q)
        so = SeriesOracle.build(ctx, p, q, 30)
        rng = np.random.default_rng(seed)
        (u,) = sample_region(ctx, {1, 2}, 1, rng)
        (w,) = sample_region(ctx, {-1, -2}, 1, rng)
        tol = so.tail() + 1e-8
        assert abs(ci.B(u).value - so.B_value(complex(ctx.X(u)))) < tol
        assert abs(ci.A(w).value - so.A_value(complex(ctx.Y(w)))) < tol

    def test_far_start_small(self) -> None:
        # walks from (5,5) need at least 10 steps to die, so every boundary series is O(t^10)
        t = Fraction(1, 100)
        ci = integrator("N,S,E,W", 5, 5, t)
        ctx = ctx_for("N,S,E,W", t)
        so = SeriesOracle.build(ctx, 5, 5, 30)
        F = ci.F().value
        assert abs(F) < 1e-12 and abs(F - so.F_value()) < so.tail() + 1e-14
        (u,) = sample_region(ctx, {1, 2}, 1, np.random.default_rng(0))
        assert abs(ci.B(u).value) < 1e-12

    @given(seed=integers(0, 999))
    def test_B_symmetry(self, *, seed: int) -> None:
        ctx = ctx_for(WEIGHTED)
        ci = integrator(WEIGHTED)
        (u,) = sample_region(ctx, {1, 2}, 1, np.random.default_rng(seed))
        w = ctx.pitau - ctx.gamma - u
        assert abs(ci.B(u).value - ci.B(w).value) < 1e-9

    @given(seed=integers(0, 999))
    def test_A_symmetry(self, *, seed: int) -> None:
        ctx = ctx_for(WEIGHTED)
        ci = integrator(WEIGHTED)
        (u,) = sample_region(ctx, {-1, -2}, 1, np.random.default_rng(seed))
        w = -ctx.pitau + ctx.gamma - u
        assert abs(ci.A(u).value - ci.A(w).value) < 1e-9

    def test_path_independence(self) -> None:
        ctx = ctx_for("N,NW,W,SW,E")
        spec = default_spec(ctx)
        dy = 0.1 * abs(ctx.gamma.imag)
        vals = [ContourIntegrator(ctx, 2, 1, spec.shifted(s)).F().value for s in (0.0, dy, -dy)]
        assert max(abs(v - vals[0]) for v in vals) < 1e-10

    def test_no_convergence(self) -> None:
        ctx = ctx_for("N,S,E,W")
        spec = ContourSpec(find_base_point(ctx), nodes=4, max_nodes=8, tol=1e-30)
        with pytest.raises(ContourError):
            ContourIntegrator(ctx, 1, 1, spec).F()

    def test_report_json(self) -> None:
        d = verify_integral(ctx_for("N,S,E,W"), n_points=1).to_json()
        assert d["t_factor"] is False and d["pass"] and len(d["z0"]) == 2


class TestCharacterization:
    @pytest.mark.parametrize("code", ["N,S,E,W", WEIGHTED, "N,NW,W,SW,E"])
    def test_checks(self, code: str) -> None:
        rep = characterization_checks(ctx_for(code), 1, 1, 30, n_points=6, seed=1)
        assert rep.ok(), rep.to_json()
        assert max(rep.series_omega0) < 1e-8

    def test_second_start(self) -> None:
        rep = characterization_checks(ctx_for("E,N,SW"), 2, 1, 30, n_points=4, seed=2)
        assert rep.ok(), rep.to_json()

    def test_detects_wrong_F(self) -> None:
        # the same residual with F off by 1e-6 must fail
        ctx = ctx_for("N,S,E,W")
        ci = integrator("N,S,E,W")
        F = ci.F().value + 1e-6
        (u,) = sample_region(ctx, {0}, 1, np.random.default_rng(0), margin=0.02)
        r = abs(complex(ctx.X(u) * ctx.Y(u)) - ci.A(u).value - F - ci.B(u).value)
        assert r > 1e-7
