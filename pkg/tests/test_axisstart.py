from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis.strategies import integers

from conewalk.axisstart import (
    AxisError,
    _Powers,
    build_axis_series,
    combi_brute,
    combi_check,
    combi_dp,
    doubling_holds,
    first_order,
    membership_residual,
    revert,
    reversion_residual,
    verify_axis,
)
from conewalk.enumerate import ConeSpec, count_cone, count_three_quadrant_plane
from conewalk.series import TSeries
from conewalk.stepset import StepSet, parse_stepset

from conftest import catalog_models, step_sets

SIMPLE = parse_stepset("N,S,E,W")


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


class TestRevert:
    def test_catalan(self) -> None:
        # W = w - t/w inverts to (w + sqrt(w^2 + 4t))/2 = w + sum_k (-1)^(k+1) C_(k-1) t^k w^(1-2k)
        N = 8
        W = TSeries.monomial(N, 1, 0) - TSeries.monomial(N, -1, 0, 1)
        I = revert(W, N)
        want = TSeries.monomial(N, 1, 0)
        for k in range(1, N + 1):
            want.add_to((k, 1 - 2 * k, 0), (-1) ** (k + 1) * catalan(k - 1))
        assert I == want

    def test_positive_power_rejected(self) -> None:
        N = 4
        W = TSeries.monomial(N, 1, 0) - TSeries.monomial(N, 2, 0, 1)
        with pytest.raises(AxisError):
            revert(W, N)

    def test_bad_head(self) -> None:
        with pytest.raises(AxisError):
            _Powers(TSeries.monomial(3, 2, 0), 1)

    def test_negative_power_needs_head(self) -> None:
        with pytest.raises(AxisError):
            _Powers(TSeries.monomial(3, 0, 1, 1), None)(-1)

    @given(s=catalog_models)
    def test_recomposition(self, *, s: StepSet) -> None:
        ax = build_axis_series(s, 8, 1)
        assert reversion_residual(ax).is_zero()

    def test_fault_injection(self) -> None:
        ax = build_axis_series(SIMPLE, 8, 1)
        bad = ax.I.copy()
        bad.add_to((5, -3, 0), Fraction(1, 7))
        assert first_order(reversion_residual(ax, bad)) == 5


class TestAxisSeries:
    @pytest.mark.parametrize("code", ["N,S,E,W", "E,N,SW", "NE,W,SW,E", "N,NW,W,SW,E", "NE,W,SW,S"])
    def test_verify(self, code: str) -> None:
        rep = verify_axis(parse_stepset(code), 10, 3)
        assert rep.ok, rep.to_json()

    @given(s=catalog_models)
    def test_catalog(self, *, s: StepSet) -> None:
        assert verify_axis(s, 8, 2).ok

    def test_weighted(self) -> None:
        assert verify_axis(parse_stepset("E:2,W:1/2,N,S:1/2,SE:1/4"), 9, 3).ok

    def test_membership_perturbed(self) -> None:
        ax = build_axis_series(SIMPLE, 8, 2)
        assert membership_residual(ax, 2).is_zero()
        H = ax.H[2].copy()
        H.add_to((3, 1, 0), 1)
        assert first_order(membership_residual(ax, 2, H)) == 3

    def test_membership_rejects_laurent(self) -> None:
        ax = build_axis_series(SIMPLE, 4, 1)
        with pytest.raises(AxisError):
            membership_residual(ax, 1, ax.I)

    def test_F_is_constant_term(self) -> None:
        ax = build_axis_series(SIMPLE, 10, 2)
        direct = count_cone(SIMPLE, ConeSpec.three_quadrant((2, 0)), 10).F()
        assert ax.F[2] == direct

    def test_bad_args(self) -> None:
        with pytest.raises(AxisError):
            build_axis_series(SIMPLE, 5, 0)


class TestDoubling:
    @given(s=catalog_models)
    def test_direct(self, *, s: StepSet) -> None:
        B1 = count_three_quadrant_plane(s, (1, 0), 10)["B"]
        B2 = count_three_quadrant_plane(s, (2, 0), 10)["B"]
        assert doubling_holds(B1, B2)

    def test_detects_change(self) -> None:
        B1 = count_three_quadrant_plane(SIMPLE, (1, 0), 8)["B"]
        B2 = count_three_quadrant_plane(SIMPLE, (2, 0), 8)["B"].copy()
        B2.add_to((7, -1, 0), 1)
        assert not doubling_holds(B1, B2)


class TestCombi:
    def test_simple_frozen(self) -> None:
        rows = combi_brute(SIMPLE, 7)
        assert [(r.total, r.touching) for r in rows] == [(0, 0), (0, 0), (0, 0), (0, 0), (0, 0), (2, 1), (0, 0), (38, 19)]

    def test_simple_dp_matches(self) -> None:
        assert [(r.total, r.touching) for r in combi_dp(SIMPLE, 7)] == [(r.total, r.touching) for r in combi_brute(SIMPLE, 7)]

    def test_check(self) -> None:
        rep = combi_check(parse_stepset("E:2,W,N,S"), 7, 10)
        assert rep.ok and rep.to_json()["pass"]

    def test_too_large(self) -> None:
        with pytest.raises(ValueError):
            combi_brute(parse_stepset("N,S,E,W,NE,NW,SE,SW"), 10)

    @given(s=step_sets())
    def test_two_to_one(self, *, s: StepSet) -> None:
        assert all(r.ok for r in combi_dp(s, 9))

    @given(s=catalog_models, n=integers(1, 6))
    def test_dp_equals_brute(self, *, s: StepSet, n: int) -> None:
        a = combi_dp(s, n)
        b = combi_brute(s, n)
        assert [(r.total, r.touching) for r in a] == [(r.total, r.touching) for r in b]
