"""Linear-time reduction of an AtMost-NValue instance to a kernel with O(k^2) intervals.

The pipeline sorts the intervals, applies three reduction rules to a
fixpoint, runs one left-to-right scan that merges followers of popular
leaders, and applies the rules again. Every change is recorded in a trace
from which kernel solutions are lifted back to the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ._state import EmptyDomainError, KernelInvariantError, ScanStats, WorkState
from .model import Instance, ValueId
from .trace import (COLLATERAL, MERGE_DROP, RED_SUBSET, Discarded, MergeBatch,
                    Selected, TraceOp, VarRemoved)

__all__ = [
    "KernelResult", "KernelInvariantError", "select_value", "discard_value",
    "remove_variable", "apply_reduction_rules", "red_dom_generalized",
    "scan_and_merge", "kernelize", "lift_solution", "replay_trace",
]


@dataclass
class KernelResult:
    kernel: Instance
    trace: list[TraceOp]
    k_in: int
    selected_count: int
    original: Instance
    scan: ScanStats = field(default_factory=ScanStats)

    @property
    def optional_intervals(self) -> int:
        return sum(len(d.intervals) for d in self.kernel.domains if len(d.intervals) > 1)

    def bound_violations(self) -> list[str]:
        """Size bounds the kernel must respect, as readable failures."""
        k = self.k_in
        out = []
        if self.optional_intervals > 2 * k:
            out.append(f"optional intervals {self.optional_intervals} > 2k={2 * k}")
        if self.scan.leaders > 4 * k:
            out.append(f"leaders {self.scan.leaders} > 4k={4 * k}")
        if self.scan.max_followers > 4 * k:
            out.append(f"followers per leader {self.scan.max_followers} > 4k={4 * k}")
        n_ivls = sum(len(d.intervals) for d in self.kernel.domains)
        if n_ivls > 4 * k + 16 * k * k:
            out.append(f"kernel intervals {n_ivls} > 4k+16k^2")
        los = {lo for d in self.kernel.domains for lo, _ in d.intervals}
        his = {hi for d in self.kernel.domains for _, hi in d.intervals}
        if self.kernel.domains:
            for v in self.kernel.universe:
                if v not in los or v not in his:
                    out.append(f"kernel value {v} is not both a left and a right endpoint")
                    break
        return out


def _label_pos(inst: Instance, v) -> int:
    return v.index if isinstance(v, ValueId) else inst.index(v)


def select_value(inst: Instance, v, trace: list | None = None) -> Instance:
    """Commit to value v: drop every variable containing it, drop v, spend one unit of budget."""
    st = WorkState(inst, trace)
    st.select(_label_pos(inst, v))
    return st.to_instance()


def discard_value(inst: Instance, v, trace: list | None = None) -> Instance:
    st = WorkState(inst, trace)
    st.discard(_label_pos(inst, v))
    return st.to_instance()


def remove_variable(inst: Instance, name: str, trace: list | None = None,
                    rule: str = RED_SUBSET) -> Instance:
    st = WorkState(inst, trace)
    st.remove_var(st.names.index(name), rule)
    return st.to_instance()


def apply_reduction_rules(inst: Instance, trace: list | None = None) -> Instance:
    st = WorkState(inst, trace)
    st.apply_rules()
    return st.to_instance()


def red_dom_generalized(inst: Instance, trace: list | None = None) -> Instance:
    """Discard any value whose set of containing intervals is covered by another value's.

    Quadratic in |D|. Equal variable sets keep the larger value.
    """
    st = WorkState(inst, trace)
    while True:
        vals = list(st.alive_values())
        ivls_of = {p: frozenset(st.stab(p)) for p in vals}
        victim = None
        for p in vals:
            vp = ivls_of[p]
            if any(q != p and vp <= ivls_of[q] and (vp != ivls_of[q] or q > p) for q in vals):
                victim = p
                break
        if victim is None:
            return st.to_instance()
        st.discard(victim)


def scan_and_merge(inst: Instance, trace: list | None = None, strict: bool = False) -> Instance:
    st = WorkState(inst, trace)
    st.scan_and_merge(strict=strict)
    return st.to_instance()


def kernelize(inst: Instance, strict: bool = False) -> KernelResult:
    trace: list = []
    st = WorkState(inst, trace)
    st.apply_rules()
    scan = st.scan_and_merge(strict=strict)
    st.apply_rules()
    return KernelResult(
        kernel=st.to_instance(),
        trace=trace,
        k_in=inst.holes,
        selected_count=sum(isinstance(op, Selected) for op in trace),
        original=inst,
        scan=scan,
    )


def _apply(st: WorkState, op: TraceOp) -> None:
    if isinstance(op, Selected):
        st.select(_pos(st, op.value))
    elif isinstance(op, Discarded):
        st.discard(_pos(st, op.value))
    elif isinstance(op, VarRemoved):
        j = st.names.index(op.var)
        if op.rule == RED_SUBSET:
            st.remove_var(j, RED_SUBSET)
        elif st.var_alive[j]:
            raise KernelInvariantError(f"trace annotates {op.var} as removed but it is present")
        else:
            st.trace.append(op)
    elif isinstance(op, MergeBatch):
        old = st.budget
        if old != op.old_budget:
            raise KernelInvariantError("merge budget does not match the replayed state")
        targets: dict[int, int] = {}
        dropped = []
        for pair in op.pairs:
            kept = _only_interval(st, pair.second_last.var)
            targets[kept] = max(targets.get(kept, -1), _pos(st, pair.new_hi))
            j = st.names.index(pair.last.var)
            if j not in dropped:
                dropped.append(j)
        st.budget -= 1
        st.trace.append(op)
        for j in dropped:
            for i in list(st.var_ivls[j]):
                st._kill(i)
            st.var_alive[j] = False
            st.n_vars -= 1
        for kept, p in targets.items():
            st._set_hi(kept, p)
    else:  # pragma: no cover
        raise TypeError(op)


def _pos(st: WorkState, label: int) -> int:
    idx = st.__dict__.get("_label_index")
    if idx is None:
        idx = {v: i for i, v in enumerate(st.labels)}
        st.__dict__["_label_index"] = idx
    return idx[label]


def _only_interval(st: WorkState, name: str) -> int:
    ids = st.var_ivls[st.names.index(name)]
    if len(ids) != 1:
        raise KernelInvariantError(f"merged follower {name} is not required")
    return ids[0]


def replay_trace(original: Instance, trace: list[TraceOp], on_merge=None) -> Instance:
    """Re-run a recorded trace forward from the original instance.

    `on_merge(index, state)` is called right after each merge batch.
    """
    st = WorkState(original, [])
    for n, op in enumerate(trace):
        _apply(st, op)
        if on_merge is not None and isinstance(op, MergeBatch):
            on_merge(n, st)
    return st.to_instance()


def _nice(values: set[int], intervals: list[tuple[int, int]]) -> set[int]:
    # shift each value to the smallest right endpoint among intervals containing it
    out = set()
    for s in values:
        best = min((hi for lo, hi in intervals if lo <= s <= hi), default=None)
        if best is not None:
            out.add(best)
    return out


def lift_solution(kr: KernelResult, values) -> list[int]:
    """Turn a solution of the kernel into a solution of the original instance."""
    values = set(values)
    if not kr.kernel.is_solution(values):
        raise ValueError("not a solution of the kernel")
    merges = [(n, op) for n, op in enumerate(kr.trace) if isinstance(op, MergeBatch)]
    snapshots: dict[int, list[tuple[int, int]]] = {}
    if merges:
        def grab(n, st):
            lab = st.labels
            snapshots[n] = [(lab[st.lo[i]], lab[st.hi[i]]) for i in st.alive_intervals()]
        replay_trace(kr.original, kr.trace, on_merge=grab)

    for n in range(len(kr.trace) - 1, -1, -1):
        op = kr.trace[n]
        if isinstance(op, Selected):
            values.add(op.value)
        elif isinstance(op, MergeBatch):
            values = _nice(values, snapshots[n])
            ends = {p.last.hi for p in op.pairs}
            t1 = min((s for s in values if s in ends), default=None)
            if t1 is None:
                raise KernelInvariantError("no merged interval is hit by its right endpoint")
            t2 = min(p.second_last.hi for p in op.pairs if p.last.hi == t1)
            values.add(t2)
    return sorted(values)


__all__ += ["EmptyDomainError", "COLLATERAL", "MERGE_DROP", "RED_SUBSET"]
