import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from cakemeasure import fixtures as fx
from cakemeasure.divisibility import check_sup_target, check_target
from cakemeasure.errors import RefinementError, ValidationError
from cakemeasure.intervals import IntervalSet, parse_interval_set as P
from cakemeasure.oracle import (
    default_epsilon,
    discretize,
    oracle_achievable,
    oracle_check,
    oracle_quantile,
    oracle_sliceable,
    oracle_sup_achievable,
    partition_search,
)
from cakemeasure.random_fixtures import random_valuation
from cakemeasure.slicing import is_sliceable
from cakemeasure.valuation import eval_set

from conftest import interval_sets

U = IntervalSet.unit()


def test_model_mass_matches(F, G):
    for v in (F, G, fx.uniform(), fx.cantor(), fx.square(64)):
        m = discretize(v, Fr(1, 64))
        assert m.total == v.total_mass
    assert discretize(fx.cantor(), Fr(1, 27)).exact


def test_mesh_validation(F):
    with pytest.raises(ValidationError):
        discretize(F, Fr(2, 5))
    with pytest.raises(RefinementError):
        discretize(fx.dirac(Fr(1, 3)), Fr(1, 8))
    m = discretize(F, Fr(1, 8))
    with pytest.raises(RefinementError):
        oracle_achievable(m, P("[0,1/3]"), Fr(1, 10))


def test_content_gap_seen_by_oracle(F):
    m = discretize(F, Fr(1, 64))
    assert not oracle_achievable(m, U, Fr(1, 5))
    assert oracle_achievable(m, U, Fr(1, 2))
    assert not oracle_achievable(m, U, Fr(1, 10))
    assert oracle_sup_achievable(m, U, Fr(1, 10))
    assert not oracle_achievable(m, U, Fr(9, 20))


def test_quantile():
    m = discretize(fx.uniform(), Fr(1, 16))
    assert oracle_quantile(m, Fr(3, 10)) == Fr(3, 10)
    c = discretize(fx.cantor(), Fr(1, 27))
    x = oracle_quantile(c, Fr(1, 4))
    assert abs(x - Fr(1, 9)) < Fr(1, 2**20)


def test_partition_search(F):
    assert partition_search(discretize(fx.uniform(), Fr(1, 8)), Fr(1, 4)) is not None
    m = discretize(F, Fr(1, 64))
    assert default_epsilon(m) == Fr(9, 40)
    assert not oracle_sliceable(m)
    assert oracle_sliceable(m, Fr(1, 2))
    parts = partition_search(discretize(fx.square(64), Fr(1, 64)), Fr(1, 8))
    assert parts is not None and all(0 < eval_set(fx.square(64), p) <= Fr(1, 8) for p in parts)


def test_oracle_check_dispatch():
    m = discretize(fx.uniform(), Fr(1, 8))
    assert oracle_check(m, "achievable", Fr(1, 2))["verdict"] is True
    assert oracle_check(m, "partition", Fr(1, 4))["verdict"] is True
    with pytest.raises(ValidationError):
        oracle_check(m, "bogus")


def grid_valuations(seed, conv):
    return random_valuation(random.Random(seed), conv, grid=16)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["stieltjes", "content"]), interval_sets(), st.integers(0, 64))
def test_d_and_dd_agree_with_oracle(seed, conv, piece, k):
    v = grid_valuations(seed, conv)
    m = discretize(v, Fr(1, 32))
    target = Fr(k, 64) * eval_set(v, piece)
    assert check_target(v, piece, target).achievable == oracle_achievable(m, piece, target)
    assert check_sup_target(v, piece, target).achievable == oracle_sup_achievable(m, piece, target)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["stieltjes", "content"]))
def test_sliceability_agrees_with_oracle(seed, conv):
    v = grid_valuations(seed, conv)
    for n in (64, 256, 1024):
        try:
            verdict = oracle_sliceable(discretize(v, Fr(1, n)))
            break
        except RefinementError:
            continue
    else:
        pytest.skip("mesh too coarse")
    assert is_sliceable(v).sliceable == verdict


def test_heavy_cell_demands_refinement():
    v = fx.resolve("mix(3/4*sq(64) + 1/4*uniform)")
    with pytest.raises(RefinementError):
        partition_search(discretize(v, Fr(1, 2)), Fr(1, 8))
