from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from cakemeasure import fixtures as fx
from cakemeasure.intervals import Interval, IntervalSet

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GRID = 32


@st.composite
def grid_points(draw, grid=GRID):
    return Fraction(draw(st.integers(0, grid)), grid)


@st.composite
def intervals(draw, grid=GRID):
    a = draw(st.integers(0, grid))
    b = draw(st.integers(a, grid))
    if a == b:
        return Interval(Fraction(a, grid), Fraction(a, grid), True, True)
    return Interval(Fraction(a, grid), Fraction(b, grid), draw(st.booleans()), draw(st.booleans()))


@st.composite
def interval_sets(draw, grid=GRID, max_parts=4):
    return IntervalSet(draw(st.lists(intervals(grid), max_size=max_parts)))


@pytest.fixture
def F():
    return fx.example_f(Fraction(1, 10))


@pytest.fixture
def G():
    return fx.example_g(Fraction(1, 20))
