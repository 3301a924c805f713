from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from cakemeasure.cdf import Breakpoint, GeneralizedCDF, Segment, cantor_distribution, dirac_cdf, uniform_cdf
from cakemeasure.errors import DomainError, PreconditionError, ValidationError
from cakemeasure.fixtures import example_f, example_g, square


def test_example_f_values():
    f = example_f(Fr(1, 10)).cdf
    assert f.eval_at(Fr(1, 2)) == Fr(1, 2)
    assert f.eval_at(Fr(1, 2), "left") == Fr(1, 20)
    assert f.eval_at(Fr(1, 2), "right") == Fr(19, 20)
    assert f.eval_at(Fr(1, 4)) == Fr(1, 40)


def test_domain_errors():
    with pytest.raises(DomainError):
        uniform_cdf().eval_at(Fr(5, 4))
    with pytest.raises(ValidationError):
        uniform_cdf().eval_at(Fr(1, 2), "middle")


def test_classify():
    c = example_f(Fr(1, 10)).cdf.classify()
    assert not c.is_right_continuous
    assert [(j.x, j.left_gap, j.right_gap) for j in c.jumps] == [(Fr(1, 2), Fr(9, 20), Fr(9, 20))]
    g = example_g(Fr(1, 20)).cdf.classify()
    assert [(j.x, j.left_gap, j.right_gap) for j in g.jumps] == [(0, 0, Fr(1, 20)), (1, Fr(1, 20), 0)]
    cc = cantor_distribution().classify()
    assert cc.is_continuous and not cc.jumps
    d = dirac_cdf(Fr(1, 2)).classify()
    assert d.is_right_continuous and not d.is_continuous


def test_quantiles():
    assert uniform_cdf().quantile_leftmost(Fr(3, 10)) == Fr(3, 10)
    assert cantor_distribution().quantile_leftmost(Fr(1, 2)) == Fr(1, 3)
    assert cantor_distribution().quantile_leftmost(Fr(1, 4)) == Fr(1, 9)
    with pytest.raises(PreconditionError) as exc:
        dirac_cdf(Fr(1, 2)).quantile_leftmost(Fr(1, 2))
    assert exc.value.witness.x == Fr(1, 2)


def test_validation():
    with pytest.raises(ValidationError):
        GeneralizedCDF([Breakpoint(0, 0, 0, 0), Breakpoint(Fr(1, 2), Fr(1, 2), Fr(1, 4), Fr(1, 4)), Breakpoint(1, 1, 1, 1)])
    with pytest.raises(ValidationError):
        GeneralizedCDF([Breakpoint(0, 0, Fr(1, 2), Fr(1, 2)), Breakpoint(1, Fr(1, 4), 1, 1)])
    with pytest.raises(ValidationError):
        GeneralizedCDF([Breakpoint(0, 0, 0, 0), Breakpoint(Fr(1, 2), 1, 1, 1)])
    with pytest.raises(ValidationError):
        GeneralizedCDF([Breakpoint(0, 0, 0, 0), Breakpoint(1, 1, 1, Fr(3, 2))])
    with pytest.raises(ValidationError):
        GeneralizedCDF([Breakpoint(0, 0, 0, 0), Breakpoint(1, 1, 1, 1)], [Segment("cantor", Fr(1, 3), Fr(2, 3))])
    with pytest.raises(ValidationError):
        Segment("spline")


def test_continuous_part_and_refine():
    f = example_f(Fr(1, 10)).cdf
    fc = f.continuous_part()
    assert fc.classify().is_continuous
    assert fc.total_mass == Fr(1, 10)
    c = cantor_distribution()
    r = c.refine([Fr(1, 4), Fr(1, 2), Fr(5, 6)])
    for k in range(0, 37):
        x = Fr(k, 36)
        assert r.eval_at(x) == c.eval_at(x)
    assert r.quantile_leftmost(Fr(3, 4)) == Fr(7, 9)


def test_addition_and_scaling():
    mix = dirac_cdf(Fr(1, 4)).scaled(Fr(3, 10)) + uniform_cdf(Fr(7, 10))
    assert mix.eval_at(Fr(1, 4)) == Fr(3, 10) + Fr(7, 40)
    assert mix.eval_at(Fr(1, 4), "left") == Fr(7, 40)
    with pytest.raises(ValidationError):
        square(8).cdf + cantor_distribution()


def test_end_positivity():
    c = cantor_distribution().refine([Fr(1, 3), Fr(2, 3)])
    # (0,1/3): rises into 1/3 from the left; (1/3,2/3) flat; (2/3,1) rises from 2/3
    assert c.right_end_positive(0) and c.left_end_positive(0)
    assert not c.left_end_positive(1) and not c.right_end_positive(1)
    assert c.left_end_positive(2)
    assert c.has_flat_gap(0)
    assert not uniform_cdf().has_flat_gap(0)


@given(st.integers(0, 64), st.integers(0, 64))
def test_monotone_sq(i, j):
    f = square(16).cdf
    x, y = sorted((Fr(i, 64), Fr(j, 64)))
    if x < y:
        assert f.eval_at(x, "right") <= f.eval_at(y, "left")


@given(st.integers(1, 63))
def test_quantile_left_inverse_on_linear(k):
    f = square(8).cdf
    x = Fr(k, 64)
    assert f.quantile_leftmost(f.eval_at(x)) == x


@given(st.integers(0, 3**6))
def test_cantor_segment_matches_truncated_formula(k):
    from cakemeasure.cantor import cantor_cdf

    x = Fr(k, 3**6)
    lo, err = cantor_cdf(x, 40)
    assert lo <= cantor_distribution().eval_at(x) <= lo + err
