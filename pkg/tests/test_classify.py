from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis.strategies import integers, sampled_from

from conewalk.classify import (
    ALGEBRAIC,
    DALGEBRAIC,
    DFINITE,
    INCONCLUSIVE,
    NOT_DALG,
    ClassifyConfig,
    classify,
    classify_catalog,
)
from conewalk.enumerate import ConeError, ConeSpec
from conewalk.groupalg import group_order, orbit_sum
from conewalk.stepset import StepSet, parse_stepset

from conftest import NONSINGULAR, TABLE1

FINITE = [e.steps for e in NONSINGULAR if group_order(e.steps).is_finite]
C3 = ConeSpec.three_quadrant()


class TestReferenceCatalog:
    @pytest.mark.parametrize("entry", TABLE1[:10], ids=lambda e: f"model{e.model_id}")
    def test_nature(self, entry) -> None:
        assert classify(entry.steps, C3).verdict == entry.expected_nature

    def test_catalog_run(self) -> None:
        res = classify_catalog(TABLE1)
        assert not res.mismatches
        assert len(res.rows) == 14 and sum(r.match is None for r in res.rows) == 4
        assert "NotDAlgebraicUpToBound(12)" in res.table()

    def test_deterministic(self) -> None:
        assert classify_catalog(TABLE1[:10]).to_json() == classify_catalog(TABLE1[:10]).to_json()


class TestDecisionTree:
    def test_singular(self) -> None:
        c = classify(parse_stepset("N,NE,E"), C3)
        assert c.verdict == ALGEBRAIC and c.evidence["singular"]

    def test_even_axis_start(self) -> None:
        assert classify(parse_stepset("N,S,E,W"), ConeSpec.make(4, 2, (2, 0))).verdict == ALGEBRAIC

    def test_even_off_axis(self) -> None:
        assert classify(parse_stepset("N,S,E,W"), ConeSpec.make(4, 2, (2, 1))).verdict == DFINITE

    def test_even_odd_L(self) -> None:
        assert classify(parse_stepset("N,S,E,W"), ConeSpec.make(4, 1, (2, 0))).verdict == DFINITE

    def test_kreweras(self) -> None:
        c = classify(parse_stepset("E,N,SW"), C3)
        assert c.verdict == ALGEBRAIC and c.evidence["cross_validation"] == "consistent"

    def test_simple(self) -> None:
        c = classify(parse_stepset("N,S,E,W"), C3)
        assert c.verdict == DFINITE and c.evidence["orbit_sum_zero"] is False

    def test_axis_start_infinite(self) -> None:
        c = classify(parse_stepset("N,NW,W,SW,E"), ConeSpec.three_quadrant((4, 0)))
        assert c.verdict == DALGEBRAIC and c.evidence["decoupling"]["trivial"]

    def test_bounded_verdict(self) -> None:
        c = classify(parse_stepset("NE,W,SW,S"), C3, ClassifyConfig(decoupling_bound=6))
        assert c.verdict == NOT_DALG and c.bound == 6 and c.label == "NotDAlgebraicUpToBound(6)"
        assert c.evidence["bounds"] == {"group": 200, "decoupling_degree": 6}

    def test_M1_caveat(self) -> None:
        c = classify(parse_stepset("N,S,E,W"), ConeSpec.make(1, 0, (1, 1)))
        assert c.verdict == DFINITE and c.evidence["caveats"]

    def test_swell_inconclusive(self) -> None:
        # psi(y) = x/((x^2 + 1) y) here; the simple and Gessel groups are monomial and never swell
        c = classify(parse_stepset("NE,NW,W,S,E"), C3, ClassifyConfig(swell_cap=4))
        assert c.verdict == INCONCLUSIVE and "error" in c.evidence["group"]

    def test_json(self) -> None:
        d = classify(parse_stepset("E,N,SW"), C3).to_json()
        assert d["label"] == ALGEBRAIC and d["evidence"]["group"]["order"] == 6


class TestProperties:
    @given(s=sampled_from(FINITE), M=sampled_from([1, 3, 5]), data=integers(0, 10**6), p=integers(1, 3), q=integers(1, 3))
    def test_odd_finite_matches_orbit_sum(self, *, s: StepSet, M: int, data: int, p: int, q: int) -> None:
        c = classify(s, ConeSpec.make(M, data % M, (p, q)), ClassifyConfig(cross_validate=False))
        assert (c.verdict == ALGEBRAIC) == orbit_sum(s, p, q).is_zero()
        assert c.verdict in (ALGEBRAIC, DFINITE)

    @given(s=sampled_from([e.steps for e in NONSINGULAR]), M=sampled_from([2, 4, 6]), data=integers(0, 10**6), p=integers(1, 3), q=integers(0, 2))
    def test_even_parity(self, *, s: StepSet, M: int, data: int, p: int, q: int) -> None:
        try:
            cone = ConeSpec.make(M, data % M, (p, q))
        except ConeError:
            return
        c = classify(s, cone)
        assert c.verdict == (ALGEBRAIC if q == 0 and cone.L % 2 == 0 else DFINITE)

    @given(s=sampled_from(FINITE))
    def test_cross_validation_consistent(self, *, s: StepSet) -> None:
        assert classify(s, C3).evidence["cross_validation"] == "consistent"
