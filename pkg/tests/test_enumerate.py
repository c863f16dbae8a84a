from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis.strategies import integers, sampled_from

from conewalk.enumerate import (
    ConeError,
    ConeSpec,
    brute_force_count,
    corrupt,
    count_cone,
    count_three_quadrant_plane,
    extract_vh,
    forbidden_step_series,
    oracle_equivalent,
    verify_functional_equation,
    verify_support_lemmas,
)
from conewalk.stepset import StepSet, parse_stepset

from conftest import catalog_models

SIMPLE = parse_stepset("N,S,E,W")
KREWERAS = parse_stepset("E,N,SW")


def walks(s: StepSet, start: tuple[int, int], n: int):
    """Plain three-quadrant simulation: yields (weight, path) for every sequence of length n."""
    for seq in product(s.weights, repeat=n):
        pos, w, path = start, Fraction(1), [start]
        for (a, b), wt in seq:
            pos = (pos[0] + a, pos[1] + b)
            w *= wt
            path.append(pos)
        yield w, path


def alive(path) -> bool:
    return all(i > 0 or j > 0 for i, j in path)


class TestConeSpec:
    def test_three_quadrant(self) -> None:
        c = ConeSpec.three_quadrant()
        assert (c.M, c.L, c.K, c.start) == (3, 1, 1, (1, 1))

    @pytest.mark.parametrize("M,L,start", [(3, 1, (0, 1)), (1, 0, (1, 0)), (3, 3, (1, 1)), (2, 0, (2, 0)), (0, 0, (1, 1))])
    def test_rejects(self, M: int, L: int, start: tuple[int, int]) -> None:
        with pytest.raises(ConeError):
            ConeSpec.make(M, L, start)

    @given(M=integers(1, 6), p=integers(1, 4), q=integers(1, 4))
    def test_L_plus_K(self, *, M: int, p: int, q: int) -> None:
        for L in range(M):
            c = ConeSpec.make(M, L, (p, q))
            assert c.L + c.K + 1 == M


class TestCountCone:
    def test_empty_walk(self) -> None:
        ts = count_cone(SIMPLE, ConeSpec.three_quadrant(), 0)
        assert ts.C().nonzero() == [((0, 1, 1), 1)]

    def test_length_two(self) -> None:
        ts = count_cone(SIMPLE, ConeSpec.three_quadrant(), 2)
        assert ts.alive_count[2] == 14
        assert ts.F().coefficient_list(0, 0)[2] == 2

    def test_frozen_simple_counts(self) -> None:
        # independent itertools simulation, frozen
        ts = count_cone(SIMPLE, ConeSpec.three_quadrant(), 6)
        assert ts.alive_count == [1, 4, 14, 54, 200, 776, 2940]
        assert ts.F().coefficient_list(0, 0) == [0, 0, 2, 0, 14, 0, 130]

    @pytest.mark.parametrize("n", range(6))
    def test_against_simulation(self, n: int) -> None:
        s = parse_stepset("E:2,W,N:1/3,SW:1/2")
        ts = count_cone(s, ConeSpec.three_quadrant(), n)
        want = Counter()
        for w, path in walks(s, (1, 1), n):
            if alive(path):
                want[path[-1]] += w
        got = {(i, j): v for (k, i, j), v in ts.C().items() if k == n}
        assert got == {k: v for k, v in want.items() if v}

    def test_negative_N(self) -> None:
        with pytest.raises(ValueError):
            count_cone(SIMPLE, ConeSpec.three_quadrant(), -1)

    @given(s=catalog_models, M=integers(1, 5), data=integers(0, 10**6))
    def test_mass_conservation(self, *, s: StepSet, M: int, data: int) -> None:
        ts = count_cone(s, ConeSpec.make(M, data % M, (1, 1)), 6)
        P1 = s.total_weight()
        assert ts.alive_count[0] == 1
        for n in range(1, 7):
            assert ts.alive_count[n] + ts.dead_count[n] == P1 * ts.alive_count[n - 1]

    @given(s=catalog_models)
    def test_spiral_equals_plane(self, *, s: StepSet) -> None:
        ts = count_cone(s, ConeSpec.three_quadrant(), 8)
        plane = count_three_quadrant_plane(s, (1, 1), 8)
        assert ts.C() == plane["C"]
        assert (ts.A(), ts.B(), ts.F()) == (plane["A"], plane["B"], plane["F"])

    @given(s=catalog_models)
    def test_three_quadrant_support(self, *, s: StepSet) -> None:
        ts = count_cone(s, ConeSpec.three_quadrant(), 7)
        assert all(i > 0 or j > 0 for (_, i, j), _v in ts.C().items())
        assert all(abs(i) <= n + 1 and abs(j) <= n + 1 for (n, i, j), _v in ts.C().items())
        assert all(v >= 0 for _k, v in ts.C().items())
        assert all(i == 0 and j < 0 for (_, i, j), _v in ts.A().items())
        assert all(j == 0 and i < 0 for (_, i, j), _v in ts.B().items())

    @given(s=catalog_models, M=integers(1, 5), data=integers(0, 10**6))
    def test_support_lemmas(self, *, s: StepSet, M: int, data: int) -> None:
        ts = count_cone(s, ConeSpec.make(M, data % M, (1, 1)), 6)
        assert all(r.ok for r in verify_support_lemmas(ts))


class TestFunctionalEquation:
    def test_simple(self) -> None:
        ts = count_cone(SIMPLE, ConeSpec.three_quadrant(), 10)
        assert all(r.ok for r in verify_functional_equation(ts))

    def test_weighted(self) -> None:
        ts = count_cone(parse_stepset("E:2,W,N,S"), ConeSpec.three_quadrant(), 8)
        assert all(r.ok for r in verify_functional_equation(ts))

    def test_corruption_located(self) -> None:
        ts = count_cone(SIMPLE, ConeSpec.three_quadrant(), 6)
        bad = corrupt(ts, 0, (3, 2, 1), 5)
        reports = [r for r in verify_functional_equation(bad) if not r.ok]
        assert reports
        hit = reports[0].first_nonzero()
        assert hit[0] == (3, 2, 1) and abs(hit[1]) == 5

    @given(s=catalog_models, M=integers(1, 5), data=integers(0, 10**6))
    def test_every_cone(self, *, s: StepSet, M: int, data: int) -> None:
        ts = count_cone(s, ConeSpec.make(M, data % M, (1 + data % 2, 1)), 7)
        assert all(r.ok for r in verify_functional_equation(ts))


class TestExtractVH:
    def test_equations(self) -> None:
        assert extract_vh(count_cone(SIMPLE, ConeSpec.three_quadrant(), 10)).ok

    def test_H1_order_one(self) -> None:
        vh = extract_vh(count_cone(SIMPLE, ConeSpec.three_quadrant(), 6))
        assert all(n > 1 for (n, _, _), _v in vh.H1.items())

    def test_V1_at_zero(self) -> None:
        # walks whose final step goes from x <= 0, y > 0 to the origin
        vh = extract_vh(count_cone(SIMPLE, ConeSpec.three_quadrant(), 6))
        got = [sum(v for (k, _, j), v in vh.V1.items() if k == n and j == 0) for n in range(7)]
        want = []
        for n in range(7):
            c = sum(w for w, p in walks(SIMPLE, (1, 1), n) if n and p[-1] == (0, 0) and alive(p[:-1]) and p[-2][0] <= 0)
            want.append(c)
        assert got == want == [0, 0, 1, 0, 7, 0, 65]

    def test_needs_three_quadrant(self) -> None:
        with pytest.raises(ConeError):
            extract_vh(count_cone(SIMPLE, ConeSpec.make(4, 1), 3))

    @given(s=catalog_models)
    def test_catalog(self, *, s: StepSet) -> None:
        assert extract_vh(count_cone(s, ConeSpec.three_quadrant(), 7)).ok


class TestBruteForce:
    def test_simple(self) -> None:
        assert oracle_equivalent(SIMPLE, ConeSpec.three_quadrant(), 8)

    def test_kreweras(self) -> None:
        assert oracle_equivalent(KREWERAS, ConeSpec.three_quadrant(), 8)

    def test_slit_plane(self) -> None:
        assert oracle_equivalent(SIMPLE, ConeSpec.make(4, 1), 7)

    def test_too_large(self) -> None:
        with pytest.raises(ValueError):
            brute_force_count(parse_stepset("N,S,E,W,NE,NW,SE,SW"), ConeSpec.three_quadrant(), 10)

    @given(s=catalog_models, M=integers(1, 5), data=integers(0, 10**6))
    def test_random_cones(self, *, s: StepSet, M: int, data: int) -> None:
        assert oracle_equivalent(s, ConeSpec.make(M, data % M, (1, 1 + data % 2)), 5)

    def test_weighted(self) -> None:
        assert oracle_equivalent(parse_stepset("E:2,W:1/2,N,S:1/2,SE:1/4"), ConeSpec.make(5, 2, (2, 1)), 6)


class TestForbiddenStep:
    def test_no_se_step(self) -> None:
        r = forbidden_step_series(parse_stepset("N,E,SW"), (1, 1), 8)
        assert r.degenerate and r.ok and r.L == r.C

    def test_simple(self) -> None:
        r = forbidden_step_series(SIMPLE, (1, 1), 10)
        assert r.degenerate and r.ok and r.L == r.C

    def test_with_se(self) -> None:
        r = forbidden_step_series(parse_stepset("E,W,N,S,SE"), (1, 1), 9)
        assert not r.degenerate and r.ok and r.L != r.C

    def test_simulation(self) -> None:
        s = parse_stepset("E,W,N,S,SE")
        r = forbidden_step_series(s, (1, 1), 5)
        for n in range(6):
            want = sum(
                w
                for w, p in walks(s, (1, 1), n)
                if alive(p) and not any(a == (0, 1) and b == (1, 0) for a, b in zip(p, p[1:]))
            )
            assert sum(v for (k, _, _), v in r.L.items() if k == n) == want

    @given(s=sampled_from(["SE,NW,N,S", "N,SE,W", "E:2,W:1/2,N,S:1/2,SE:1/4", "SE,N,W,NE"]), p=integers(1, 3), q=integers(0, 3))
    def test_relation(self, *, s: str, p: int, q: int) -> None:
        assert forbidden_step_series(parse_stepset(s), (p, q), 7).ok
