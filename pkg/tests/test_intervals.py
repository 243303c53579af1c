import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ercheck.intervals import (
    IntervalFamily,
    baptiste_intervals,
    discrete_slopes,
    inflection_profile,
    o1_set,
    o2_set,
    ot_set,
    pair_intervals,
    pair_row_intervals,
    pair_rows,
    positive_inflections,
)
from ercheck.model import Activity, ContractError, CuspInstance, slack_matrix

from helpers import act_a, activities, instances


def single_a():
    return CuspInstance((act_a(),), 1)


def test_candidate_sets():
    inst = single_a()
    assert o1_set(inst) == {2, 4, 6}
    assert o2_set(inst) == {4, 6, 8}
    assert ot_set(inst, 3) == {7}


def test_baptiste_family_examples():
    fam = baptiste_intervals(single_a())
    for iv in [(2, 8), (2, 6), (4, 8), (4, 6)]:
        assert iv in fam
    assert fam.provenance == "baptiste"
    assert len(baptiste_intervals(CuspInstance((), 1))) == 0


@given(st.lists(st.tuples(st.integers(0, 20), st.integers(0, 6)), max_size=5))
def test_baptiste_family_size_bound_for_fixed_activities(specs):
    acts = tuple(Activity(k, s, s, p, 1) for k, (s, p) in enumerate(specs))
    assert len(baptiste_intervals(CuspInstance(acts, 1))) <= 15 * len(acts) ** 2


def test_family_rejects_empty_interval_and_iterates_sorted():
    with pytest.raises(ContractError):
        IntervalFamily(frozenset({(3, 3)}), "x")
    fam = IntervalFamily(frozenset({(2, 5), (1, 9), (1, 3)}), "x")
    assert list(fam) == [(1, 3), (1, 9), (2, 5)]


def test_pair_reflexive_row_a():
    a = act_a()
    assert (2, 8) in pair_intervals(a, a)
    assert ("A", 2, 8) in pair_rows(a, a)


def test_pair_drops_empty_rows_when_j_ends_first():
    i = Activity(0, 10, 12, 3, 1)
    j = Activity(1, 0, 2, 3, 1)
    for _, t1, t2 in pair_rows(i, j):
        assert t1 < t2


def test_row_variants_differ_on_known_pairs():
    # E: the end mirrors t1 = s_max_i, not s_min_i
    i = Activity(0, 0, 3, 8, 1)
    j = Activity(1, 2, 5, 3, 1)
    derived = dict((r, (t1, t2)) for r, t1, t2 in pair_rows(i, j))
    alt = dict((r, (t1, t2)) for r, t1, t2 in pair_rows(i, j, {"E": "alternate"}))
    assert derived["E"] == (3, 2 + 8 - 3)
    assert alt["E"] == (3, 2 + 8 - 0)


@settings(max_examples=300)
@given(activities(max_t=15), activities(max_t=15, id=1))
def test_pair_rows_stay_in_candidate_forms(i, j):
    rows = pair_rows(i, j)
    assert len(rows) <= 8
    for _, t1, t2 in rows:
        assert t1 < t2
        assert t1 in {i.s_min, i.s_max, i.s_min + i.e_max - t2}
        assert t2 in {j.e_min, j.e_max, j.s_min + j.e_max - t1}


@pytest.mark.parametrize("t1,on,soi,doi,case", [
    (1, False, 4, 8, 1),
    (3, False, 4, 7, 3),
    (5, True, None, 6, 4),
])
def test_inflection_examples(t1, on, soi, doi, case):
    prof = inflection_profile(act_a(), t1)
    assert (prof.initially_on, prof.soi, prof.doi, prof.case) == (on, soi, doi, case)


def test_inflection_no_events_after_earliest_end():
    prof = inflection_profile(act_a(), 7)
    assert prof.soi is None and prof.doi is None and prof.case == 2


def test_discrete_slopes_examples():
    a = act_a()
    assert discrete_slopes(a, 1, 8) == (1, 0)
    assert discrete_slopes(a, 1, 6) == (1, 1)
    assert discrete_slopes(a, 7, 9) == (0, 0)
    with pytest.raises(ContractError):
        discrete_slopes(a, 4, 5)


@settings(max_examples=400)
@given(activities(max_t=15), st.integers(-3, 30))
def test_single_positive_inflection_is_doi(a, t1):
    found = positive_inflections(a, t1, range(t1 + 1, 50))
    assert len(found) <= 1
    prof = inflection_profile(a, t1)
    assert found == ([prof.doi] if prof.doi is not None else [])


def _family_min(inst, family):
    times, s = slack_matrix(inst)
    lo = int(times[0])
    best = None
    for t1, t2 in family:
        if inst.horizon[0] <= t1 and t2 <= inst.horizon[1]:
            v = int(s[t1 - lo, t2 - lo])
            best = v if best is None else min(best, v)
    return best


@settings(max_examples=200)
@given(instances(max_n=5, max_t=10, max_p=5, min_n=1))
def test_families_catch_every_overload(inst):
    times, s = slack_matrix(inst)
    n = len(times)
    negative = any(s[i, j] < 0 for i in range(n) for j in range(i + 1, n))
    if not negative:
        return
    assert _family_min(inst, baptiste_intervals(inst)) < 0
    assert _family_min(inst, pair_row_intervals(inst, mirrored=True)) < 0


def test_pair_row_family_provenance():
    fam = pair_row_intervals(single_a(), mirrored=True)
    assert fam.provenance == "table1"
    assert (2, 8) in fam
