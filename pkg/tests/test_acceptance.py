"""Runs every acceptance criterion at its stated tolerance; ``pytest -s`` shows one line each."""

from __future__ import annotations

import pytest

from conewalk.acceptance import CRITERIA, run_criterion


class TestAcceptance:
    @pytest.mark.parametrize("k", sorted(CRITERIA))
    def test_criterion(self, k: int) -> None:
        r = run_criterion(k)
        print(r.line())
        assert r.ok, r.detail
