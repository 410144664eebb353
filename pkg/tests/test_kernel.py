import pytest

from nvkernel.instance_io import parse_instance
from nvkernel.kernel import (apply_reduction_rules, discard_value, kernelize, lift_solution,
                             red_dom_generalized, remove_variable, replay_trace, scan_and_merge,
                             select_value)
from nvkernel.model import Instance
from nvkernel.solver import consistency_by_enumeration
from nvkernel.trace import MERGE_DROP, MergeBatch, format_trace

from suites import merge_suite, oracle_suite

REDUCED = """atmost-nvalue 1
values list 4 6 7 8 9 10 11 12 13 14
n 5
var x3 4-4 10-11
var x4 4-6
var x6 6-7
var x7 7-8
var x9 8-9
var x10 9-10
var x11 11-11 13-13
var x12 11-12
var x13 12-12 14-14
var x14 12-13
var x15 13-14
"""

KERNEL = """atmost-nvalue 1
values list 4 6 9 10 11 12 13 14
n 4
var x3 4-4 10-11
var x4 4-6
var x6 6-9
var x7 9-10
var x11 11-11 13-13
var x12 11-12
var x13 12-12 14-14
var x14 12-13
var x15 13-14
"""


def test_rules_reproduce_reduced(sample):
    trace = []
    out = apply_reduction_rules(sample, trace)
    assert out == parse_instance(REDUCED)
    assert format_trace(trace).splitlines() == [
        "remove x5 red-subset", "remove x8 red-subset",
        "discard 1", "discard 5",
        "select 2", "remove x1 red-unit-collateral", "remove x2 red-unit-collateral",
        "discard 3",
    ]


def test_kernelize_golden(sample):
    kr = kernelize(sample, strict=True)
    assert kr.kernel == parse_instance(KERNEL)
    tail = format_trace(kr.trace).splitlines()[8:]
    assert tail == ["merge N5->4 x3:x6+x9->9 x4:x7+x10->10",
                    "remove x9 merge-drop", "remove x10 merge-drop",
                    "discard 7", "discard 8"]
    assert kr.k_in == 5 and kr.kernel.holes == 3
    assert kr.bound_violations() == []


def test_scan_alone_on_reduced_instance():
    inst = scan_and_merge(parse_instance(REDUCED))
    assert inst.budget == 4
    assert inst.domain("x6").intervals == ((6, 9),)
    assert "x9" not in inst.names and "x10" not in inst.names


def test_primitives():
    inst = Instance.build(range(1, 6), 3, {"a": [(1, 2), (4, 5)], "b": [(2, 3)], "c": [(5, 5)]})
    s = select_value(inst, 2)
    assert s.names == ["c"] and s.budget == 2 and 2 not in s.universe
    d = discard_value(inst, 3)
    assert d.domain("b").intervals == ((2, 2),)
    # 3 is gone, so 2 and 4 become neighbours and a's runs coalesce
    assert d.domain("a").intervals == ((1, 5),)
    assert remove_variable(inst, "b").names == ["a", "c"]


def test_select_accepts_value_id(sample):
    assert select_value(sample, sample.value_id(2)) == select_value(sample, 2)


def test_lift_sample(sample):
    kr = kernelize(sample)
    assert lift_solution(kr, [4, 9, 12, 13]) == [2, 4, 7, 9, 12, 13]
    with pytest.raises(ValueError):
        lift_solution(kr, [4, 9, 12])


def test_replay_is_deterministic(sample):
    kr = kernelize(sample)
    assert replay_trace(sample, kr.trace) == kr.kernel
    assert kernelize(sample).trace == kr.trace


def test_bounds_and_replay_on_suite():
    for inst in oracle_suite():
        kr = kernelize(inst, strict=True)
        assert kr.bound_violations() == [], inst
        assert replay_trace(inst, kr.trace) == kr.kernel
        assert kr.kernel.holes <= inst.holes


def test_local_dom_is_exhaustive():
    # after the fixpoint the quadratic definition finds nothing left to discard
    for inst in oracle_suite()[:300]:
        k = apply_reduction_rules(inst)
        assert red_dom_generalized(k) == k


def test_generalized_dom_keeps_larger_on_ties():
    inst = Instance.build(range(1, 4), 1, {"a": [(1, 3)]})
    assert red_dom_generalized(inst).universe == (3,)


def _kernel_verdict(kr):
    if not kr.kernel.domains:
        return kr.kernel.budget >= 0, ()
    v = consistency_by_enumeration(kr.kernel)
    return v.consistent, v.witness.values if v.consistent else None


def test_merge_suite_lifts():
    suite = merge_suite()
    assert len(suite) >= 15
    for inst in suite:
        kr = kernelize(inst, strict=True)
        assert kr.bound_violations() == []
        assert any(isinstance(op, MergeBatch) for op in kr.trace)
        assert any(getattr(op, "rule", None) == MERGE_DROP for op in kr.trace)
        best = next(b for b in range(1, inst.n + 1)
                    if consistency_by_enumeration(inst.with_budget(b)).consistent)
        below = kernelize(inst.with_budget(best - 1))
        assert _kernel_verdict(below)[0] is False
        at = kernelize(inst.with_budget(best))
        ok, w = _kernel_verdict(at)
        assert ok
        lifted = lift_solution(at, w)
        assert inst.with_budget(best).is_solution(lifted)
