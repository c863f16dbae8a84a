from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis.strategies import sampled_from

from conewalk.stepset import (
    CatalogError,
    DuplicateDirection,
    BadWeight,
    EmptyStepSet,
    StepSet,
    UnknownDirection,
    format_stepset,
    is_nonsingular,
    load_catalog,
    parse_stepset,
    step_polynomials,
)

from conftest import NONSINGULAR, TABLE1, step_sets

DIHEDRAL = [(1, 0, 0, 1), (0, -1, 1, 0), (-1, 0, 0, -1), (0, 1, -1, 0), (1, 0, 0, -1), (-1, 0, 0, 1), (0, 1, 1, 0), (0, -1, -1, 0)]


class TestParse:
    def test_simple(self) -> None:
        assert parse_stepset("N,S,E,W").as_dict() == {(0, 1): 1, (0, -1): 1, (1, 0): 1, (-1, 0): 1}

    def test_weights(self) -> None:
        assert parse_stepset("E:1/2, NE:3").as_dict() == {(1, 0): Fraction(1, 2), (1, 1): 3}

    def test_coordinate_pairs(self) -> None:
        assert parse_stepset("(1,-1):2;(0,1)").as_dict() == {(1, -1): 2, (0, 1): 1}

    def test_duplicate(self) -> None:
        with pytest.raises(DuplicateDirection):
            parse_stepset("N,N")

    @pytest.mark.parametrize("text", ["Q", "(2,0)", "(0,0)"])
    def test_unknown(self, text: str) -> None:
        with pytest.raises(UnknownDirection):
            parse_stepset(text)

    @pytest.mark.parametrize("text", ["N:0", "N:-1", "N:1/0", "N:abc"])
    def test_bad_weight(self, text: str) -> None:
        with pytest.raises(BadWeight):
            parse_stepset(text)

    def test_empty(self) -> None:
        with pytest.raises(EmptyStepSet):
            parse_stepset(" , ")

    @given(s=step_sets())
    def test_roundtrip(self, *, s: StepSet) -> None:
        assert parse_stepset(format_stepset(s)) == s


class TestNonsingular:
    def test_simple(self) -> None:
        assert is_nonsingular(parse_stepset("N,S,E,W"))

    def test_right_half(self) -> None:
        assert not is_nonsingular(parse_stepset("NE,E,SE"))

    def test_nothing_left(self) -> None:
        assert not is_nonsingular(parse_stepset("NE,N,SE,S"))

    def test_kreweras(self) -> None:
        assert is_nonsingular(parse_stepset("E,N,SW"))

    @given(s=step_sets(), m=sampled_from(DIHEDRAL))
    def test_dihedral_invariance(self, *, s: StepSet, m: tuple[int, int, int, int]) -> None:
        assert is_nonsingular(s.transform(m)) == is_nonsingular(s)

    @given(s=step_sets())
    def test_matches_angular_gap(self, *, s: StepSet) -> None:
        # nonsingular iff every angular gap between consecutive steps is below pi
        angles = sorted(math.atan2(j, i) for i, j in s.steps)
        gaps = [b - a for a, b in zip(angles, angles[1:])] + [angles[0] + 2 * math.pi - angles[-1]]
        assert is_nonsingular(s) == all(g < math.pi - 1e-12 for g in gaps)


class TestStepPolynomials:
    def test_simple(self) -> None:
        sp = step_polynomials(parse_stepset("N,S,E,W"))
        assert sp.A_minus1 == {0: 1} and sp.A_1 == {0: 1}
        assert sp.A_0 == {1: 1, -1: 1}

    def test_single_step(self) -> None:
        assert step_polynomials(parse_stepset("E")).P == {(1, 0): 1}

    def test_weighted(self) -> None:
        sp = step_polynomials(parse_stepset("E:2, SW:1/3"))
        assert sp.P == {(1, 0): 2, (-1, -1): Fraction(1, 3)}
        assert sp.P_at(Fraction(1), Fraction(1)) == Fraction(7, 3)

    @given(s=step_sets(), x=sampled_from([Fraction(2), Fraction(-1, 3), Fraction(5, 7)]), y=sampled_from([Fraction(3), Fraction(-2, 5)]))
    def test_decompositions(self, *, s: StepSet, x: Fraction, y: Fraction) -> None:
        sp = step_polynomials(s)

        def ev1(d: dict, u: Fraction) -> Fraction:
            return sum((w * u**k for k, w in d.items()), Fraction(0))

        P = sp.P_at(x, y)
        assert P == sum(y**k * ev1(sp.A(k), x) for k in (-1, 0, 1))
        assert P == sum(x**k * ev1(sp.B(k), y) for k in (-1, 0, 1))

    @given(s=step_sets())
    def test_total_weight(self, *, s: StepSet) -> None:
        assert step_polynomials(s).P_at(Fraction(1), Fraction(1)) == s.total_weight()


class TestCatalog:
    def test_reference_row(self) -> None:
        e = TABLE1[0]
        assert e.model_id == 1 and e.steps == parse_stepset("N,S,E,W")
        assert e.expected_nature == "DFiniteNotAlgebraic"

    def test_csv_row(self, tmp_path) -> None:
        p = tmp_path / "c.csv"
        p.write_text("1, N;S;E;W, D-finite, simple walk\n")
        (e,) = load_catalog(p)
        assert e.steps == parse_stepset("N,S,E,W") and e.expected_nature == "DFiniteNotAlgebraic"

    def test_singular_flagged_nonsingular(self, tmp_path) -> None:
        p = tmp_path / "c.csv"
        p.write_text("1, N;S;E;W, DF, ok\n2, NE;E;SE, alg, half plane\n")
        with pytest.raises(CatalogError) as exc:
            load_catalog(p)
        assert exc.value.line == 2

    def test_singular_marked(self, tmp_path) -> None:
        p = tmp_path / "c.csv"
        p.write_text("7, NE;E;SE, alg, singular\n")
        assert not load_catalog(p)[0].nonsingular

    def test_empty(self, tmp_path) -> None:
        p = tmp_path / "c.csv"
        p.write_text("")
        assert load_catalog(p) == []

    def test_duplicate_id(self, tmp_path) -> None:
        p = tmp_path / "c.csv"
        p.write_text("1, N;S;E;W\n1, E;N;SW\n")
        with pytest.raises(CatalogError):
            load_catalog(p)

    def test_nonsingular_catalog(self) -> None:
        assert len(NONSINGULAR) == 74
        assert all(is_nonsingular(e.steps) for e in NONSINGULAR)
        codes = {e.steps.code() for e in NONSINGULAR} | {e.steps.mirror().code() for e in NONSINGULAR}
        brute = {StepSet.from_code(f"{m:08b}").code() for m in range(1, 256) if is_nonsingular(StepSet.from_code(f"{m:08b}"))}
        assert codes == brute
