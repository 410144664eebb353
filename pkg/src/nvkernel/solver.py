"""Consistency checks for AtMost-NValue.

`solve_fpt` kernelizes and then branches on the first interval of the
kernel, keeping only one branch when both children lose exactly one hole.
`consistency_by_enumeration` and `min_hitting_oracle` are independent
baselines used to cross-check it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from ._state import WorkState
from .kernel import kernelize, lift_solution
from .model import Instance, VarDomain, sort_intervals

RHO = (1 + math.sqrt(5)) / 2


class OracleCapError(ValueError):
    pass


@dataclass
class Solution:
    values: tuple[int, ...]
    assignment: dict[str, int]


@dataclass
class BranchStats:
    nodes_visited: int = 0
    root_k: int = 0
    single_branch_prunes: int = 0
    log: list = field(default_factory=list)


@dataclass(frozen=True)
class BranchEvent:
    """One branching step: what each child selected and where it resumes."""
    depth: int
    k: int
    branch_on: str
    selected_a: tuple[int, ...]
    selected_b: tuple[int, ...]
    k_a: int
    k_b: int
    first_a: str | None
    first_b: str | None
    decision: str           # "both", "A only", "B only"


@dataclass
class Verdict:
    consistent: bool
    witness: Solution | None = None
    stats: BranchStats = field(default_factory=BranchStats)


def build_assignment(inst: Instance, values) -> dict[str, int]:
    """Map each variable to the smallest of its domain values lying in `values`."""
    chosen = sorted(set(values))
    out = {}
    for d in inst.domains:
        v = next((v for v in chosen if d.contains(v)), None)
        if v is None:
            raise ValueError(f"no chosen value lies in the domain of {d.name}")
        out[d.name] = v
    return out


def _solution(inst: Instance, values) -> Solution:
    values = tuple(sorted(set(values)))
    return Solution(values, build_assignment(inst, values))


def greedy_pierce(inst: Instance) -> tuple[int, list[int]]:
    """Minimum number of points hitting every interval of a hole-free instance."""
    if inst.holes:
        raise ValueError(f"greedy piercing needs a hole-free instance (k={inst.holes})")
    chosen: list[int] = []
    for iv in sort_intervals(inst):
        if not chosen or iv.lo > chosen[-1]:
            chosen.append(iv.hi)
    return len(chosen), chosen


def consistency_by_enumeration(inst: Instance) -> Verdict:
    """Try every way of restricting each variable to one of its intervals."""
    best = None
    combos = 0
    for pick in itertools.product(*(d.intervals for d in inst.domains)):
        combos += 1
        restricted = Instance(inst.universe, inst.budget,
                              tuple(VarDomain(d.name, (iv,)) for d, iv in zip(inst.domains, pick)))
        size, chosen = greedy_pierce(restricted)
        if best is None or size < best[0]:
            best = (size, chosen)
    stats = BranchStats(nodes_visited=combos, root_k=inst.holes)
    size, chosen = best
    if size <= inst.budget:
        return Verdict(True, _solution(inst, chosen), stats)
    return Verdict(False, None, stats)


def min_hitting_oracle(inst: Instance, cap: int = 20) -> tuple[int, list[int]]:
    """Smallest value set meeting every domain, by subset enumeration."""
    u = inst.universe
    if len(u) > cap:
        raise OracleCapError(f"universe of {len(u)} values exceeds the oracle cap {cap}")
    if not inst.domains:
        return 0, []
    masks = []
    for vals in inst.domain_sets().values():
        m = 0
        for i, v in enumerate(u):
            if v in vals:
                m |= 1 << i
        masks.append(m)
    for size in range(1, len(u) + 1):
        for combo in itertools.combinations(range(len(u)), size):
            s = 0
            for i in combo:
                s |= 1 << i
            if all(m & s for m in masks):
                return size, [u[i] for i in combo]
    raise AssertionError("the full universe always hits every non-empty domain")


def oracle_verdict(inst: Instance, cap: int = 20) -> Verdict:
    size, chosen = min_hitting_oracle(inst, cap)
    if size <= inst.budget:
        return Verdict(True, _solution(inst, chosen))
    return Verdict(False)


def _selected_below(st: WorkState, bound_label: int) -> int:
    return sum(1 for v in st.selected if v < bound_label)


def _branch(st: WorkState, stats: BranchStats, prune: bool, depth: int):
    """Return the values selected on a successful path, or None."""
    stats.nodes_visited += 1
    if st.budget < 0:
        return None
    if st.n_vars == 0:
        return []
    if st.budget == 0:
        return None
    k = st.holes
    if k == 0:
        chosen = st.greedy()
        return chosen if len(chosen) <= st.budget else None

    first = st.first_interval()
    a = st.copy()
    a.select(st.hi[first])
    a.dom_unit_fixpoint()
    b = st.copy()
    b.remove_interval(first)
    b.dom_unit_fixpoint()

    ka, kb = a.holes, b.holes
    fa = a.first_interval() if a.n_vars else None
    fb = b.first_interval() if b.n_vars else None
    decision = "both"
    if prune and ka == k - 1 and kb == k - 1 and fa is not None and fa == fb \
            and (a.lo[fa], a.hi[fa]) == (b.lo[fb], b.hi[fb]):
        bound = st.labels[a.hi[fa]]
        s1, s2 = _selected_below(a, bound), _selected_below(b, bound)
        decision = "A only" if s1 <= s2 else "B only"
        stats.single_branch_prunes += 1
    stats.log.append(BranchEvent(
        depth, k, st.names[st.ivar[first]], tuple(a.selected), tuple(b.selected), ka, kb,
        st.names[a.ivar[fa]] if fa is not None else None,
        st.names[b.ivar[fb]] if fb is not None else None, decision))

    for child, keep in ((a, decision != "B only"), (b, decision != "A only")):
        if not keep:
            continue
        found = _branch(child, stats, prune, depth + 1)
        if found is not None:
            return child.selected + found
    return None


def solve_fpt(inst: Instance, prune: bool = True, witness: bool = True) -> Verdict:
    """Kernelize, then run the golden-ratio branching search on the kernel."""
    kr = kernelize(inst)
    st = WorkState(kr.kernel)
    stats = BranchStats(root_k=kr.kernel.holes)
    found = _branch(st, stats, prune, 0)
    if found is None:
        return Verdict(False, None, stats)
    if not witness:
        return Verdict(True, None, stats)
    values = lift_solution(kr, found)
    return Verdict(True, _solution(inst, values), stats)


def is_consistent(inst: Instance, method: str = "fpt", prune: bool = True) -> bool:
    if method == "fpt":
        return solve_fpt(inst, prune=prune, witness=False).consistent
    if method == "enum":
        return consistency_by_enumeration(inst).consistent
    if method == "oracle":
        return oracle_verdict(inst).consistent
    raise ValueError(f"unknown method {method!r}")


def solve(inst: Instance, method: str = "fpt", prune: bool = True) -> Verdict:
    if method == "fpt":
        return solve_fpt(inst, prune=prune)
    if method == "enum":
        return consistency_by_enumeration(inst)
    if method == "oracle":
        return oracle_verdict(inst)
    raise ValueError(f"unknown method {method!r}")
