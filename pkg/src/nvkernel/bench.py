"""Benchmark harness: kernel sizes, branch-tree sizes and phase timings per instance."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .generate import GenParams, gen_random, random_suite
from .kernel import kernelize
from .model import Instance
from .solver import RHO, _branch, BranchStats, min_hitting_oracle
from ._state import WorkState

NODE_CONSTANT = 4.0
SUITES = ("random", "ksweep", "doubling", "all")


@dataclass
class BenchRow:
    index: int
    suite: str
    n: int
    values: int
    k: int
    budget: int
    kernel_vars: int
    kernel_intervals: int
    kernel_values: int
    root_k: int
    nodes: int
    consistent: bool
    kernel_ok: bool
    values_ok: bool
    nodes_ok: bool
    t_kernel: float
    t_search: float


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    @property
    def flags(self) -> dict[str, int]:
        """Number of rows breaking each recorded bound."""
        return {
            "kernel_bound": sum(not r.kernel_ok for r in self.rows),
            "values_bound": sum(not r.values_ok for r in self.rows),
            "node_bound": sum(not r.nodes_ok for r in self.rows),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f.name for f in fields(BenchRow)])
        for r in self.rows:
            w.writerow(asdict(r).values())
        return buf.getvalue()

    def ratios(self, suite: str = "doubling") -> list[float]:
        t = [r.t_kernel for r in self.rows if r.suite == suite]
        return [b / a for a, b in zip(t, t[1:]) if a > 0]


def measure(inst: Instance, index: int = 0, suite: str = "file", repeats: int = 1) -> BenchRow:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        kr = kernelize(inst)
        times.append(time.perf_counter() - t0)
    kern = kr.kernel
    t0 = time.perf_counter()
    stats = BranchStats(root_k=kern.holes)
    found = _branch(WorkState(kern), stats, True, 0)
    t_search = time.perf_counter() - t0
    k = inst.holes
    n_ivls = sum(len(d.intervals) for d in kern.domains)
    return BenchRow(
        index=index, suite=suite, n=inst.n, values=len(inst.universe), k=k,
        budget=inst.budget, kernel_vars=kern.n, kernel_intervals=n_ivls,
        kernel_values=len(kern.universe), root_k=stats.root_k,
        nodes=stats.nodes_visited, consistent=found is not None,
        kernel_ok=n_ivls <= 4 * k + 16 * k * k and not kr.bound_violations(),
        values_ok=len(kern.universe) <= 2 * n_ivls,
        nodes_ok=stats.nodes_visited <= NODE_CONSTANT * RHO ** stats.root_k,
        t_kernel=min(times), t_search=t_search)


def tight_budget(inst: Instance, rng: np.random.Generator) -> Instance:
    """Set N to the exact optimum or one below it, so verdicts split evenly."""
    best, _ = min_hitting_oracle(inst)
    return inst.with_budget(max(0, best - int(rng.integers(0, 2))))


def min_budget(inst: Instance) -> int:
    """Smallest consistent budget, by bisection over the branching solver."""
    from .solver import solve_fpt
    lo, hi = 0, inst.n
    while lo < hi:
        mid = (lo + hi) // 2
        if solve_fpt(inst.with_budget(mid), witness=False).consistent:
            hi = mid
        else:
            lo = mid + 1
    return lo


def random_instances(count: int, seed: int = 0, **kw) -> list[Instance]:
    rng = np.random.default_rng(seed)
    return [tight_budget(inst, rng) for inst in random_suite(count, seed, **kw)]


def ksweep_instances(ks=range(2, 19), per_k: int = 5, seed: int = 0) -> list[Instance]:
    # single-value intervals keep most holes alive through kernelization
    out = []
    for k in ks:
        for s in range(per_k):
            inst = gen_random(GenParams(k, max(5, 2 * k // 3 + 3), k, 1,
                                        seed=seed * 1000 + s, interval_len=(1, 1)))
            out.append(inst.with_budget(max(0, min_budget(inst) - 1)))
    return out


def doubling_instances(sizes=(1000, 2000, 4000, 8000), k: int = 6, seed: int = 0) -> list[Instance]:
    return [gen_random(GenParams(n, n, k, n // 3, seed=seed, interval_len=(1, 4))) for n in sizes]


def run_bench(suite: str = "all", count: int = 200, seed: int = 0,
              instances: list[Instance] | None = None) -> BenchReport:
    if instances is not None:
        return BenchReport([measure(inst, t) for t, inst in enumerate(instances)])
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    plan = []
    if suite in ("random", "all"):
        plan += [("random", i, 1) for i in random_instances(count, seed)]
    if suite in ("ksweep", "all"):
        plan += [("ksweep", i, 1) for i in ksweep_instances(seed=seed)]
    if suite in ("doubling", "all"):
        plan += [("doubling", i, 3) for i in doubling_instances(seed=seed)]
    return BenchReport([measure(inst, t, name, reps) for t, (name, inst, reps) in enumerate(plan)])
