from __future__ import annotations

from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from conewalk.stepset import DIRECTIONS, StepSet, load_catalog

settings.register_profile(
    "conewalk",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.differing_executors],
)
settings.load_profile("conewalk")

NONSINGULAR = load_catalog(name="nonsingular")
TABLE1 = load_catalog(name="table1")

weights = st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=8)


@st.composite
def step_sets(draw, min_size: int = 1) -> StepSet:
    dirs = draw(st.lists(st.sampled_from(DIRECTIONS), min_size=min_size, max_size=8, unique=True))
    return StepSet(tuple((d, draw(weights)) for d in dirs))


catalog_models = st.sampled_from([e.steps for e in NONSINGULAR])
