"""Operation records emitted while reducing an instance."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .model import Interval

RED_SUBSET = "red-subset"
COLLATERAL = "red-unit-collateral"
MERGE_DROP = "merge-drop"
REMOVE_RULES = (RED_SUBSET, COLLATERAL, MERGE_DROP)


@dataclass(frozen=True)
class Selected:
    value: int


@dataclass(frozen=True)
class Discarded:
    value: int


@dataclass(frozen=True)
class VarRemoved:
    """A variable leaves the instance.

    Only `red-subset` removals act on replay; the other two rules annotate
    removals already performed by the preceding Selected or MergeBatch.
    """
    var: str
    rule: str


@dataclass(frozen=True)
class MergePair:
    leader: Interval
    second_last: Interval   # kept, right endpoint extended
    last: Interval          # dropped
    new_hi: int


@dataclass(frozen=True)
class MergeBatch:
    old_budget: int
    new_budget: int
    pairs: tuple[MergePair, ...]


TraceOp = Union[Selected, Discarded, VarRemoved, MergeBatch]


def format_op(op: TraceOp) -> str:
    if isinstance(op, Selected):
        return f"select {op.value}"
    if isinstance(op, Discarded):
        return f"discard {op.value}"
    if isinstance(op, VarRemoved):
        return f"remove {op.var} {op.rule}"
    pairs = " ".join(f"{p.leader.var}:{p.second_last.var}+{p.last.var}->{p.new_hi}" for p in op.pairs)
    return f"merge N{op.old_budget}->{op.new_budget} {pairs}"


def format_trace(trace) -> str:
    return "".join(format_op(op) + "\n" for op in trace)
