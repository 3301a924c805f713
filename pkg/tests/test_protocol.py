import random
from fractions import Fraction as Fr

import pytest

from cakemeasure import fixtures as fx
from cakemeasure.errors import PreconditionError, ValidationError
from cakemeasure.intervals import IntervalSet
from cakemeasure.protocol import demo_proportional
from cakemeasure.random_fixtures import random_continuous


def test_two_agents():
    a = demo_proportional([fx.uniform(), fx.square(64)])
    assert [str(p) for p in a.pieces] == ["[0,1/2]", "(1/2,1]"]
    assert a.values == (Fr(1, 2), Fr(3, 4))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 7])
def test_random_agents_get_fair_shares(n):
    rng = random.Random(n)
    agents = [random_continuous(rng) for _ in range(n)]
    a = demo_proportional(agents)
    assert all(v >= Fr(1, n) for v in a.values)
    union = IntervalSet.empty()
    for p in a.pieces:
        assert (union & p).is_empty()
        union = union | p
    assert union == IntervalSet.unit()


def test_rejects_bad_agents(F):
    with pytest.raises(ValidationError):
        demo_proportional([fx.uniform()])
    with pytest.raises(PreconditionError):
        demo_proportional([fx.uniform(), fx.dirac(Fr(1, 2))])
    with pytest.raises(PreconditionError):
        demo_proportional([fx.uniform(), F])
    with pytest.raises(PreconditionError):
        demo_proportional([fx.uniform(), fx.uniform(2)])
