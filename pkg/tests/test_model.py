import pytest

from nvkernel.model import (Instance, InstanceError, Interval, canonicalize, count_holes,
                            counting_sort, sort_intervals)


def test_sample_holes_and_intervals(sample):
    assert sample.n == 15
    assert count_holes(sample) == 5
    assert len(sample.intervals()) == 20


def test_value_id_roundtrip(sample):
    vid = sample.value_id(10)
    assert vid.index == 9 and vid.label == 10


def test_from_sets_builds_maximal_runs():
    inst = Instance.from_sets([1, 2, 3, 5, 6, 9], 2, {"a": {1, 2, 3, 5}, "b": {9}})
    # 3 and 5 are neighbours in this universe, so a is one run
    assert inst.domain("a").intervals == ((1, 5),)
    assert inst.holes == 0


@pytest.mark.parametrize("doms", [
    {"a": [(1, 2), (3, 4)]},      # touching runs
    {"a": [(2, 1)]},              # reversed
    {"a": [(0, 1)]},              # outside D
    {"a": []},                    # empty
])
def test_invalid_domains_rejected(doms):
    with pytest.raises(InstanceError):
        Instance.build(range(1, 6), 1, doms)


def test_duplicate_names_rejected():
    with pytest.raises(InstanceError):
        Instance.build(range(1, 4), 1, [("a", [(1, 1)]), ("a", [(2, 2)])])


def test_sort_is_permutation_by_hi_then_lo(sample):
    ivls = sort_intervals(sample)
    assert sorted(ivls, key=lambda i: (i.var, i.lo)) == sorted(sample.intervals(), key=lambda i: (i.var, i.lo))
    keys = [(i.hi, i.lo) for i in ivls]
    assert keys == sorted(keys)
    assert ivls[0] == Interval("x1", 1, 2)


def test_sort_ties_follow_variable_order():
    inst = Instance.build(range(1, 4), 1, [("b", [(1, 2)]), ("a", [(1, 2)])])
    assert [i.var for i in sort_intervals(inst)] == ["b", "a"]


def test_counting_sort_stable():
    items = [(3, "a"), (1, "b"), (3, "c"), (0, "d")]
    assert counting_sort(items, lambda t: t[0], 4) == [(0, "d"), (1, "b"), (3, "a"), (3, "c")]


def test_canonicalize_drops_unused_values():
    inst = Instance.build(range(1, 8), 1, {"a": [(2, 3), (6, 6)]})
    c = canonicalize(inst)
    assert c.universe == (2, 3, 6)
    assert c.domain("a").intervals == ((2, 6),) and c.holes == 0


def test_is_solution(sample):
    assert sample.is_solution([2, 4, 7, 9, 12, 13])
    assert not sample.is_solution([2, 4, 7, 9, 12])
