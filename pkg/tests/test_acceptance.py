"""Acceptance criteria, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -s` or `python3 tests/test_acceptance.py`.
"""

import gc
import itertools
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nvkernel.bench import doubling_instances, ksweep_instances, random_instances  # noqa: E402
from nvkernel.instance_io import read_instance  # noqa: E402
from nvkernel.kernel import apply_reduction_rules, kernelize  # noqa: E402
from nvkernel.propagate import enforce_hac  # noqa: E402
from nvkernel.solver import (RHO, consistency_by_enumeration, min_hitting_oracle,  # noqa: E402
                             solve_fpt)
from nvkernel.trace import format_trace  # noqa: E402
from suites import oracle_suite  # noqa: E402

SAMPLE = Path(__file__).parent / "data" / "sample.nvk"
RESULTS = []   # printed by the terminal summary hook in conftest


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_1_golden_pipeline():
    t0 = time.perf_counter()
    inst = read_instance(SAMPLE)
    trace = []
    mid = apply_reduction_rules(inst, trace)
    kr = kernelize(inst)
    dt = time.perf_counter() - t0
    ops = [line for line in format_trace(trace).splitlines() if "collateral" not in line]
    tail = [line for line in format_trace(kr.trace).splitlines()[len(trace):]]
    k = kr.kernel
    checks = [
        inst.holes == 5,
        (mid.n, len(mid.intervals()), mid.universe, mid.budget) == (11, 14, (4, *range(6, 15)), 5),
        ops == ["remove x5 red-subset", "remove x8 red-subset", "discard 1", "discard 5",
                "select 2", "discard 3"],
        (k.n, len(k.intervals()), k.universe, k.budget) == (9, 12, (4, 6, *range(9, 15)), 4),
        tail[0] == "merge N5->4 x3:x6+x9->9 x4:x7+x10->10",
        tail[-2:] == ["discard 7", "discard 8"],
        dt < 1.0,
    ]
    report(1, all(checks), f"checks={checks} time={dt:.3f}s")


def test_2_golden_solve():
    t0 = time.perf_counter()
    v = solve_fpt(read_instance(SAMPLE))
    dt = time.perf_counter() - t0
    e = v.stats.log[0]
    checks = [
        v.consistent,
        v.witness.values == (2, 4, 7, 9, 12, 13),
        (e.branch_on, e.selected_a, e.selected_b) == ("x3", (4, 9), (6, 10)),
        (e.first_a, e.first_b, e.decision) == ("x11", "x11", "A only"),
        dt < 1.0,
    ]
    report(2, all(checks), f"witness={v.witness.values} first={e.decision} time={dt:.3f}s")


def test_3_oracle_triple_agreement():
    suite = oracle_suite()
    t0 = time.perf_counter()
    disagree = bad_witness = 0
    for inst in suite:
        a = solve_fpt(inst)
        b = consistency_by_enumeration(inst)
        c = min_hitting_oracle(inst)[0] <= inst.budget
        disagree += not (a.consistent == b.consistent == c)
        for v in (a, b):
            if v.consistent and not inst.is_solution(v.witness.values):
                bad_witness += 1
    dt = time.perf_counter() - t0
    pos = sum(min_hitting_oracle(i)[0] <= i.budget for i in suite)
    ok = len(suite) >= 1000 and disagree == 0 and bad_witness == 0 and dt < 60
    report(3, ok, f"instances={len(suite)} consistent={pos} disagreements={disagree} "
                  f"bad witnesses={bad_witness} time={dt:.1f}s")


def test_4_kernel_bounds():
    violations = []
    for inst in oracle_suite():
        violations += kernelize(inst, strict=True).bound_violations()
    report(4, not violations, f"violations={len(violations)} {violations[:3]}")


def _supported(inst):
    sets = list(inst.domain_sets().values())
    out = set()
    for r in range(1, min(inst.budget, len(inst.universe)) + 1):
        for combo in itertools.combinations(inst.universe, r):
            if all(set(combo) & d for d in sets):
                out.update(combo)
    return out


def test_5_hac():
    suite = random_instances(300, seed=21, max_values=10)
    t0 = time.perf_counter()
    wrong = not_idem = filtered = 0
    for inst in suite:
        res = enforce_hac(inst)
        sup = _supported(inst)
        if not sup:
            wrong += not res.failed
            continue
        expected = [v for v in inst.universe if v not in sup]
        wrong += res.removed_values != expected
        filtered += bool(expected)
        not_idem += bool(enforce_hac(res.filtered_instance).removed_values)
    dt = time.perf_counter() - t0
    ok = len(suite) >= 300 and wrong == 0 and not_idem == 0 and dt < 120
    report(5, ok, f"instances={len(suite)} with filtering={filtered} mismatches={wrong} "
                  f"non-idempotent={not_idem} time={dt:.1f}s")


def test_6_branch_growth():
    worst = {}
    flips = 0
    for inst in ksweep_instances():
        a = solve_fpt(inst, witness=False)
        b = solve_fpt(inst, prune=False, witness=False)
        flips += a.consistent != b.consistent
        for budget in (inst.budget, inst.budget + 1):
            s = solve_fpt(inst.with_budget(budget), witness=False).stats
            k = inst.holes
            worst[k] = max(worst.get(k, 0.0), s.nodes_visited / RHO ** k)
    c = max(worst.values())
    ok = sorted(worst) == list(range(2, 19)) and c <= 4 and flips == 0
    report(6, ok, f"C={c:.3f} over k=2..18, prune flips={flips}")


def test_7_linearity():
    gc.disable()
    try:
        times = _kernel_times(doubling_instances())
    finally:
        gc.enable()
    ratios = [b / a for a, b in zip(times, times[1:])]
    ok = all(1.5 <= r <= 3.0 for r in ratios)
    report(7, ok, "ratios=" + " ".join(f"{r:.2f}" for r in ratios))


def _kernel_times(instances):
    times = []
    for inst in instances:
        best = float("inf")
        for _ in range(5):
            t0 = time.perf_counter()
            kernelize(inst)
            best = min(best, time.perf_counter() - t0)
        times.append(best)
    return times


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
