import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from cakemeasure import fixtures as fx
from cakemeasure.errors import PreconditionError, ValidationError
from cakemeasure.intervals import IntervalSet, parse_interval_set as P
from cakemeasure.random_fixtures import random_continuous, random_valuation
from cakemeasure.slicing import (
    decompose,
    greedy_slicing,
    is_sliceable,
    refutation_probe,
    slice_valuation,
    truth_row,
    truth_table,
)
from cakemeasure.divisibility import check_divisibility
from cakemeasure.valuation import jump_tokens


def test_sliceability_verdicts(F, G):
    assert is_sliceable(fx.uniform()).sliceable
    assert is_sliceable(fx.cantor()).sliceable
    r = is_sliceable(F)
    assert not r.sliceable and r.obstruction.x == Fr(1, 2) and r.obstruction.mass == Fr(9, 20)
    assert "phantom at 1/2" in r.describe()
    g = is_sliceable(G)
    assert not g.sliceable and g.obstruction.mass == Fr(1, 20)
    d = is_sliceable(fx.dirac(Fr(1, 3)))
    assert d.describe() == "atom at 1/3 of mass 1"


def test_cantor_slicing_cuts():
    s = slice_valuation(fx.cantor(), Fr(1, 4))
    assert s.cuts == (Fr(1, 9), Fr(1, 3), Fr(7, 9))
    assert s.masses == (Fr(1, 4),) * 4
    assert s.pieces[0] == P("[0,1/9]") and s.pieces[-1] == P("(7/9,1]")


def test_slicing_rejects_jumps(F):
    with pytest.raises(PreconditionError):
        slice_valuation(F, Fr(1, 2))
    with pytest.raises(ValidationError):
        slice_valuation(fx.uniform(), 0)


def test_zero_valuation_is_single_piece():
    z = fx.uniform(0)
    assert is_sliceable(z).sliceable
    s = slice_valuation(z, Fr(1, 10))
    assert s.pieces == (IntervalSet.unit(),)


@settings(max_examples=60)
@given(st.integers(0, 10**6), st.integers(1, 40))
def test_slicing_partitions_with_small_pieces(seed, k):
    v = random_continuous(random.Random(seed))
    eps = Fr(1, k)
    s = slice_valuation(v, eps)
    assert all(0 <= m <= eps for m in s.masses)
    assert sum(s.masses) == v.total_mass
    union = IntervalSet.empty()
    for p in s.pieces:
        assert (union & p).is_empty()
        union = union | p
    assert union == IntervalSet.unit()


def test_greedy_on_uniform_terminates():
    t = greedy_slicing(fx.uniform(), Fr(1, 4))
    assert t.terminated and t.rule_holds and t.remainders_nonincreasing
    assert [s.piece_mass for s in t.steps] == [Fr(1, 4)] * 3
    assert t.remainder_tends_to_zero


def test_greedy_on_f_drains_to_phantoms(F):
    t = greedy_slicing(F, Fr(1, 20), max_iter=300)
    assert t.stop_reason == "iteration limit"
    assert t.rule_holds and t.remainders_nonincreasing
    assert t.final_remainder_mass == Fr(9, 10)
    assert not t.remainder_tends_to_zero
    assert t.drain_from_step is not None
    assert t.observed_remainder_mass > Fr(9, 10)


def test_greedy_rejects_bad_arguments():
    with pytest.raises(ValidationError):
        greedy_slicing(fx.uniform(), 0)
    with pytest.raises(ValidationError):
        greedy_slicing(fx.uniform(), Fr(1, 2), max_iter=0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 10))
def test_greedy_on_continuous_contents(seed, k):
    v = random_valuation(random.Random(seed), "content", max_jumps=0)
    t = greedy_slicing(v, Fr(1, k), max_iter=200)
    assert t.rule_holds and t.remainders_nonincreasing
    for s in t.steps:
        assert s.remainder_mass >= 0


def test_decompose(F):
    m = fx.resolve("mix(1/5*dirac(1/4) + 3/10*dirac(1/2) + 1/2*cantor)")
    d = decompose(m)
    assert d.atoms == ((Fr(1, 4), Fr(1, 5)), (Fr(1, 2), Fr(3, 10)))
    assert d.atom_mass == Fr(1, 2)
    assert is_sliceable(d.remainder).sliceable
    assert d.remainder.total_mass == Fr(1, 2)
    with pytest.raises(PreconditionError):
        decompose(F)


@pytest.mark.parametrize("expr", ["exF(1/10)", "exG(1/20)", "dirac(1/3)", "mix(1/2*dirac(1/2) + 1/2*uniform)"])
def test_refutation_probe_fails(expr):
    v = fx.resolve(expr)
    tok = max(jump_tokens(v), key=lambda t: t.mass)
    piece, alpha = refutation_probe(v, tok)
    assert not check_divisibility(v, piece, alpha).achievable


def test_truth_rows(F, G):
    rows = truth_table([fx.uniform(), fx.cantor(), fx.dirac(Fr(1, 2)), fx.square(64), F, G], sample_count=20)
    assert all(r.theorem_consistent and r.probes_consistent for r in rows)
    flags = [(r.atom_free, r.sliceable, r.d_universal) for r in rows]
    assert flags[0] == flags[1] == flags[3] == (True, True, True)
    assert flags[2] == (False, False, False)
    assert flags[4] == flags[5] == (True, False, False)
    assert rows[4].lemma3_holds is False and rows[0].lemma3_holds is None
    assert not rows[4].dd_universal and rows[4].refutation is not None


def test_truth_row_with_oracle():
    r = truth_row(fx.resolve("exF(1/8)"), sample_count=15, oracle_mesh=Fr(1, 64))
    assert r.probes_consistent and not r.skipped
    assert all(p.oracle_d is not None for p in r.probes)
