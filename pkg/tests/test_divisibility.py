import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from cakemeasure import fixtures as fx
from cakemeasure.divisibility import (
    MAX_TOKENS,
    achievable_set,
    check_divisibility,
    check_sup_divisibility,
    check_sup_target,
    check_target,
    construct_dd,
    exact_divide,
    min_interval_count,
)
from cakemeasure.errors import CapacityError, DomainError, PreconditionError
from cakemeasure.intervals import IntervalSet, parse_interval_set as P
from cakemeasure.random_fixtures import random_continuous, random_valuation
from cakemeasure.valuation import eval_set

from conftest import interval_sets

U = IntervalSet.unit()


def comps(ach):
    return [(c.total_lo, c.total_hi, c.lo_open, c.hi_open) for c in ach.components]


def test_achievable_set_content_example(F):
    ach = achievable_set(F, U)
    assert comps(ach) == [
        (0, Fr(1, 10), False, True),
        (Fr(9, 20), Fr(11, 20), True, True),
        (Fr(9, 10), 1, True, False),
    ]
    assert ach.gap(Fr(1, 5)) == (Fr(1, 10), Fr(9, 20))
    assert not ach.contains(Fr(1, 10)) and ach.sup_contains(Fr(1, 10))
    assert ach.contains(Fr(1, 2)) and not ach.contains(Fr(9, 20))


def test_achievable_set_uniform():
    assert comps(achievable_set(fx.uniform(), U)) == [(0, 1, False, False)]


def test_subpiece_gap_for_g(G):
    a = P("(0,1/18]")
    assert eval_set(G, a) == Fr(1, 10)
    d = check_divisibility(G, a, Fr(1, 2))
    assert not d.achievable
    assert (d.gap_below, d.gap_above) == (Fr(1, 20), Fr(1, 20))
    assert check_sup_divisibility(G, a, Fr(1, 2)).achievable


def test_capacity():
    terms = " + ".join(f"1/32*dirac({k}/32)" for k in range(32))
    v = fx.resolve(f"mix({terms})")
    assert len([t for t in v.cdf.breakpoints if t.left_gap]) == 32 > MAX_TOKENS
    with pytest.raises(CapacityError):
        achievable_set(v, U)


def test_exact_divide_examples():
    assert exact_divide(fx.uniform(), U, Fr(3, 10)) == P("[0,3/10]")
    assert exact_divide(fx.cantor(), U, Fr(1, 4)) == P("[0,1/9]")
    assert exact_divide(fx.uniform(), P("(0,1/4] u (1/2,3/4]"), Fr(1, 2)) == P("(0,1/4]")


def test_exact_divide_errors():
    with pytest.raises(PreconditionError) as exc:
        exact_divide(fx.resolve("mix(1/2*dirac(1/2) + 1/2*uniform)"), U, Fr(1, 2))
    assert exc.value.witness.x == Fr(1, 2)
    with pytest.raises(PreconditionError):
        exact_divide(fx.cantor(), P("(1/3,2/3)"), Fr(1, 2))
    with pytest.raises(DomainError):
        exact_divide(fx.uniform(), U, 1)


@pytest.mark.parametrize("name", ["uniform", "cantor", "sq(64)"])
def test_exact_divide_nested(name):
    v = fx.resolve(name)
    b = P("[0,1/5] u (1/3,1]")
    alphas = [Fr(1, 4), Fr(1, 3), Fr(1, 2), Fr(9, 10)]
    outs = [exact_divide(v, b, a) for a in alphas]
    for a, w in zip(alphas, outs):
        assert eval_set(v, w) == a * eval_set(v, b)
        assert w <= b
    for w1, w2 in zip(outs, outs[1:]):
        assert w1 <= w2


def test_check_d_examples(F, G):
    assert not check_target(F, U, Fr(1, 5)).achievable
    d = check_divisibility(fx.uniform(), U, Fr(2, 7))
    assert d.witness == P("[0,2/7]")
    g = check_target(G, U, Fr(99, 100))
    assert g.achievable and eval_set(G, g.witness) == Fr(99, 100)
    for alpha in (Fr(1, 20), Fr(3, 10), Fr(19, 20), Fr(99, 100)):
        d = check_divisibility(G, U, alpha)
        assert d.achievable and eval_set(G, d.witness) == alpha and d.witness <= U


def test_witness_presence_invariant(F):
    for t in [Fr(k, 40) for k in range(41)]:
        d = check_target(F, U, t)
        assert (d.witness is not None) == d.achievable == (d.mode == "exactSet")
        if d.achievable:
            assert eval_set(F, d.witness) == t


def test_check_dd_examples(F):
    assert not check_sup_target(F, U, Fr(1, 5)).achievable
    for k in range(0, 101):
        t = Fr(k, 100)
        expect = t <= Fr(1, 10) or Fr(9, 20) < t <= Fr(11, 20) or Fr(9, 10) < t
        d = check_sup_target(F, U, t)
        assert d.achievable == expect, t
        if d.mode == "increasingSequenceSup":
            ms = [eval_set(F, s) for s in d.sequence]
            assert all(m < t for m in ms) and ms == sorted(ms)
            assert all(a <= b for a, b in zip(d.sequence, d.sequence[1:]))
            assert t - ms[-1] < t - ms[0]
    u = check_sup_divisibility(fx.uniform(), U, Fr(1, 3))
    assert u.achievable
    m = fx.resolve("mix(1/2*dirac(1/2) + 1/2*uniform)")
    assert check_sup_target(m, U, Fr(1, 4)).achievable


def test_measures_d_equals_dd():
    rng = random.Random(3)
    for _ in range(40):
        v = random_valuation(rng)
        for _ in range(5):
            a, b = sorted(rng.sample(range(17), 2))
            piece = P(f"[{a}/16,{b}/16]")
            alpha = Fr(rng.randint(1, 15), 16)
            assert check_divisibility(v, piece, alpha).achievable == check_sup_divisibility(v, piece, alpha).achievable


@given(st.integers(0, 10**6), interval_sets(), st.integers(1, 31))
def test_continuous_measures_always_divisible(seed, piece, k):
    v = random_continuous(random.Random(seed))
    alpha = Fr(k, 32)
    d = check_divisibility(v, piece, alpha)
    assert d.achievable
    assert eval_set(v, d.witness) == alpha * eval_set(v, piece)
    assert d.witness <= piece


@given(st.integers(0, 10**6), st.sampled_from(["stieltjes", "content"]), interval_sets(), st.integers(0, 64))
def test_witnesses_are_exact(seed, conv, piece, k):
    v = random_valuation(random.Random(seed), conv)
    target = Fr(k, 64) * eval_set(v, piece)
    d = check_target(v, piece, target)
    if d.achievable:
        assert eval_set(v, d.witness) == target and d.witness <= piece
    dd = check_sup_target(v, piece, target)
    assert dd.achievable >= d.achievable


@pytest.mark.parametrize("name", ["uniform", "cantor"])
@pytest.mark.parametrize("alpha", [Fr(1, 3), Fr(2, 5), Fr(1, 2)])
@pytest.mark.parametrize("strategy", ["aligned", "uniform"])
def test_construct_dd_bounds(name, alpha, strategy):
    v = fx.resolve(name)
    r = construct_dd(v, U, alpha, 5, strategy)
    k = int(1 / alpha) + 1
    assert r.start_index == k
    for i, (s, m) in enumerate(zip(r.sets, r.normalized)):
        assert alpha - Fr(1, k + i) < m <= alpha
        if i:
            assert r.sets[i - 1] <= s
    assert list(r.normalized) == sorted(r.normalized)


def test_construct_dd_on_subpiece_normalizes():
    a = P("[0,1/2]")
    r = construct_dd(fx.uniform(), a, Fr(2, 5), 3, "uniform")
    assert all(s <= a for s in r.sets)
    assert r.masses[-1] <= Fr(1, 5)


def test_construct_dd_errors_and_degenerate(F):
    with pytest.raises(PreconditionError):
        construct_dd(fx.dirac(Fr(1, 2)), U, Fr(1, 2), 2)
    with pytest.raises(PreconditionError):
        construct_dd(F, U, Fr(1, 2), 2)
    r = construct_dd(F, P("[0,1/4]"), Fr(1, 2), 3)
    assert r.normalized[-1] == Fr(1, 2)
    z = construct_dd(fx.cantor(), P("(1/3,2/3)"), Fr(1, 2), 3)
    assert all(s.is_empty() for s in z.sets) and len(z.sets) == 3


def test_min_interval_count_examples(G):
    assert min_interval_count(G, Fr(99, 100)) == 2
    assert min_interval_count(G, Fr(99, 100), max_parts=1) is None
    assert min_interval_count(G, Fr(9, 10)) == 1
    assert min_interval_count(fx.uniform(), Fr(1, 2)) == 1
    assert min_interval_count(fx.uniform(), 0) == 0
    with pytest.raises(CapacityError):
        min_interval_count(G, Fr(1, 2), max_parts=5)


def test_min_interval_count_content_gaps(F):
    assert min_interval_count(F, Fr(1, 5)) is None
    assert min_interval_count(F, Fr(1, 2)) == 1
    assert min_interval_count(F, 1) == 1
    assert min_interval_count(F, Fr(19, 20)) == 1
    assert eval_set(F, P("(9/20,1]")) > Fr(19, 20)


def test_min_interval_count_atoms():
    v = fx.resolve("mix(3/10*dirac(1/4) + 1/5*dirac(3/4) + 1/2*uniform)")
    assert min_interval_count(v, Fr(1, 2)) == 1
    assert min_interval_count(fx.dirac(Fr(1, 2)), Fr(1, 2)) is None
    two = fx.resolve("mix(1/2*dirac(1/4) + 1/2*dirac(3/4))")
    assert min_interval_count(two, Fr(1, 2)) == 1
    assert min_interval_count(two, 1) == 1


@given(st.integers(0, 10**6), st.sampled_from(["stieltjes", "content"]), interval_sets(max_parts=3))
def test_min_interval_count_upper_bound(seed, conv, s):
    v = random_valuation(random.Random(seed), conv)
    k = min_interval_count(v, eval_set(v, s))
    assert k is not None and k <= len(s.parts)
    assert check_target(v, U, eval_set(v, s)).achievable
