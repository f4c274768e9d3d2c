"""Conductor bounds, the CM j-invariant census, and singular K3 class counts."""

import pytest
from hypothesis import given, settings, strategies as st

from cmbrauer.cm_census import (
    EXCEPTIONAL_CM_COUNTS,
    cm_count_per_field,
    cm_count_total,
    conductor_bound,
    conductor_bound_over_degree,
    d_permissible_conductors,
    singular_k3_bound,
    singular_k3_refined_sum,
    singular_k3_strong_bound,
)
from cmbrauer.quadratic import (
    FundamentalDiscriminant,
    Order,
    class_number_order,
    is_fundamental_discriminant,
)
from cmbrauer.rounding import COARSE_EPS, FINE_EPS


def test_conductor_bound_clauses():
    assert conductor_bound(FundamentalDiscriminant(-7), 2).bound == 4
    assert conductor_bound(FundamentalDiscriminant(-4), 2).bound == 5
    assert conductor_bound(FundamentalDiscriminant(-3), 2).bound == 7
    assert conductor_bound(FundamentalDiscriminant(-20), 2).bound == 4
    assert conductor_bound(FundamentalDiscriminant(-3), 3).bound == 9
    assert conductor_bound(FundamentalDiscriminant(-3), 4).bound == 16


def test_conductor_bound_degree_one_cap():
    # exceptional clause values above 3 cannot occur at ring class degree 1
    assert conductor_bound(FundamentalDiscriminant(-4), 1).bound == 3
    assert conductor_bound(FundamentalDiscriminant(-3), 1).bound == 3
    assert conductor_bound(FundamentalDiscriminant(-7), 1).bound == 2
    assert conductor_bound(FundamentalDiscriminant(-11), 1).bound == 1
    assert "capped" in conductor_bound(FundamentalDiscriminant(-3), 1).case_label


@given(st.integers(min_value=-600, max_value=-3), st.integers(min_value=1, max_value=30))
def test_conductor_bound_always_at_most_3d2(dk, d):
    if not is_fundamental_discriminant(dk):
        return
    assert conductor_bound(FundamentalDiscriminant(dk), d).bound <= 3 * d * d


def test_conductor_bound_over_degree_closed_form():
    assert [conductor_bound_over_degree(d) for d in (1, 2, 3, 4)] == [3, 7, 9, 16]
    for d in range(1, 51):
        assert conductor_bound_over_degree(d) == min(3 * d * d, max(d * d, 7))


def test_permissible_conductors_degree_one():
    # Q(i): f in {1, 2, 3} have h = 1, 1, 2; only h <= 1 is permissible
    pairs = d_permissible_conductors(FundamentalDiscriminant(-4), 1)
    assert pairs == [(1, 1), (2, 1)]
    pairs = d_permissible_conductors(FundamentalDiscriminant(-3), 1)
    assert pairs == [(1, 1), (2, 1), (3, 1)]
    pairs = d_permissible_conductors(FundamentalDiscriminant(-163), 1)
    assert pairs == [(1, 1)]


def test_permissible_conductors_respect_class_numbers():
    for dk in (-3, -4, -7, -8, -20):
        field = FundamentalDiscriminant(dk)
        for d in (1, 2, 3):
            for f, h in d_permissible_conductors(field, d):
                assert h == class_number_order(Order(field, f))
                assert h <= d
                assert f <= conductor_bound(field, d).bound


def test_exceptional_census_counts():
    for (dk, d), expected in EXCEPTIONAL_CM_COUNTS.items():
        assert cm_count_per_field(FundamentalDiscriminant(dk), d) == expected


def test_census_degree_one_complete():
    report = cm_count_total(1, 200)
    assert report.total == 13
    assert report.certified_complete
    assert len(report.per_field_counts) == 9
    assert dict(report.per_field_counts)[-3] == 3
    assert dict(report.per_field_counts)[-4] == 2
    assert dict(report.per_field_counts)[-7] == 2


def test_census_degree_one_small_bound_not_certified():
    report = cm_count_total(1, 50)
    assert not report.certified_complete
    assert report.total == 3 + 2 + 2 + 4 * 1  # fields down to -43 only


def test_census_degree_two():
    report = cm_count_total(2, 500)
    assert not report.certified_complete
    assert len(report.per_field_counts) == 27
    assert report.total == 71
    assert report.cube_bound == 8 * 27


def test_census_rejects_bad_degree():
    with pytest.raises(ValueError):
        cm_count_total(0, 200)


def test_singular_k3_log_bound():
    assert singular_k3_bound(1, 9) == 56
    # tighter rounding can only shrink the certified upper bound
    coarse = singular_k3_bound(1, 9, eps=COARSE_EPS)
    fine = singular_k3_bound(1, 9, eps=FINE_EPS)
    assert fine <= coarse
    assert singular_k3_bound(1, 9) <= coarse


def test_singular_k3_refined_sum():
    assert singular_k3_refined_sum(1, 200) == 45
    assert singular_k3_refined_sum(1, 200) <= singular_k3_bound(1, 9)


def test_singular_k3_refined_monotone_in_bound():
    assert singular_k3_refined_sum(1, 50) <= singular_k3_refined_sum(1, 200)


def test_singular_k3_strong_bound_scales():
    weak = singular_k3_bound(1, 9)
    strong = singular_k3_strong_bound(1, 9)
    assert strong > weak
    strong_fine = singular_k3_strong_bound(1, 9, eps=FINE_EPS)
    assert strong_fine <= strong


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=4), st.integers(min_value=1, max_value=12))
def test_singular_k3_bound_monotone(d, n):
    assert singular_k3_bound(d, n) <= singular_k3_bound(d + 1, n)
    assert singular_k3_bound(d, n) <= singular_k3_bound(d, n + 1)
