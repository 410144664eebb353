"""Instances of the AtMost-NValue consistency problem.

A variable's domain is stored succinctly as its maximal runs ("intervals")
over the current value universe. Endpoints are kept as external integer
labels; ordinal positions are derived from the universe on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence


class InstanceError(ValueError):
    """An instance violates a structural invariant."""


class ValueId(NamedTuple):
    index: int
    label: int


@dataclass(frozen=True, order=True)
class Interval:
    var: str
    lo: int
    hi: int

    def __contains__(self, value: int) -> bool:
        return self.lo <= value <= self.hi


@dataclass(frozen=True)
class VarDomain:
    name: str
    intervals: tuple[tuple[int, int], ...]

    @property
    def holes(self) -> int:
        return len(self.intervals) - 1

    def contains(self, value: int) -> bool:
        return any(lo <= value <= hi for lo, hi in self.intervals)


@dataclass(frozen=True)
class Instance:
    universe: tuple[int, ...]
    budget: int
    domains: tuple[VarDomain, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "domains", tuple(self.domains))
        index = {}
        for i, v in enumerate(self.universe):
            if i and v <= self.universe[i - 1]:
                raise InstanceError("universe must be strictly increasing")
            index[v] = i
        object.__setattr__(self, "_index", index)
        seen = set()
        for dom in self.domains:
            if dom.name in seen:
                raise InstanceError(f"duplicate variable {dom.name!r}")
            seen.add(dom.name)
            if not dom.intervals:
                raise InstanceError(f"variable {dom.name!r} has an empty domain")
            prev_hi = None
            for lo, hi in dom.intervals:
                if lo not in index or hi not in index:
                    raise InstanceError(f"variable {dom.name!r}: endpoint outside the universe")
                if lo > hi:
                    raise InstanceError(f"variable {dom.name!r}: reversed interval {lo}-{hi}")
                if prev_hi is not None and index[lo] <= index[prev_hi] + 1:
                    raise InstanceError(
                        f"variable {dom.name!r}: intervals overlap or touch at {prev_hi}/{lo}")
                prev_hi = hi

    @classmethod
    def build(cls, universe: Iterable[int], budget: int,
              domains: dict[str, Sequence[tuple[int, int]]] | Sequence[tuple[str, Sequence[tuple[int, int]]]]):
        items = domains.items() if isinstance(domains, dict) else domains
        return cls(tuple(universe), budget,
                   tuple(VarDomain(name, tuple(map(tuple, ivls))) for name, ivls in items))

    @classmethod
    def from_sets(cls, universe: Iterable[int], budget: int, sets: dict[str, Iterable[int]]):
        """Build an instance from explicit value sets, computing maximal runs."""
        universe = tuple(sorted(set(universe)))
        pos = {v: i for i, v in enumerate(universe)}
        doms = []
        for name, values in sets.items():
            idx = sorted(pos[v] for v in set(values))
            doms.append(VarDomain(name, _runs(idx, universe)))
        return cls(universe, budget, tuple(doms))

    def value_id(self, label: int) -> ValueId:
        return ValueId(self._index[label], label)

    def index(self, label: int) -> int:
        return self._index[label]

    @property
    def n(self) -> int:
        return len(self.domains)

    @property
    def names(self) -> list[str]:
        return [d.name for d in self.domains]

    @cached_property
    def holes(self) -> int:
        return count_holes(self)

    def domain(self, name: str) -> VarDomain:
        for d in self.domains:
            if d.name == name:
                return d
        raise KeyError(name)

    def values_of(self, dom: VarDomain) -> list[int]:
        out = []
        for lo, hi in dom.intervals:
            out.extend(self.universe[self._index[lo]:self._index[hi] + 1])
        return out

    def domain_sets(self) -> dict[str, set[int]]:
        return {d.name: set(self.values_of(d)) for d in self.domains}

    def intervals(self) -> list[Interval]:
        return [Interval(d.name, lo, hi) for d in self.domains for lo, hi in d.intervals]

    def with_budget(self, budget: int) -> Instance:
        return Instance(self.universe, budget, self.domains)

    def is_solution(self, values: Iterable[int]) -> bool:
        """True when `values` has at most `budget` elements and hits every domain."""
        chosen = set(values)
        if len(chosen) > self.budget:
            return False
        return all(any(lo <= v <= hi for v in chosen for lo, hi in d.intervals)
                   for d in self.domains)


def _runs(idx: list[int], universe: Sequence[int]) -> tuple[tuple[int, int], ...]:
    runs = []
    for i in idx:
        if runs and runs[-1][1] == i - 1:
            runs[-1][1] = i
        else:
            runs.append([i, i])
    return tuple((universe[a], universe[b]) for a, b in runs)


def count_holes(inst: Instance) -> int:
    return sum(len(d.intervals) - 1 for d in inst.domains)


def canonicalize(inst: Instance) -> Instance:
    """Restrict the universe to values lying in some domain.

    Domain value sets are unchanged; runs separated only by dropped values
    are coalesced, so the hole count never grows.
    """
    sets = inst.domain_sets()
    used = set().union(*sets.values()) if sets else set()
    return Instance.from_sets(sorted(used), inst.budget, sets)


def counting_sort(items: list, key, size: int) -> list:
    """Stable counting sort of `items` by integer `key(item)` in [0, size)."""
    counts = [0] * (size + 1)
    keys = [key(it) for it in items]
    for k in keys:
        counts[k + 1] += 1
    for i in range(size):
        counts[i + 1] += counts[i]
    out = [None] * len(items)
    for it, k in zip(items, keys):
        out[counts[k]] = it
        counts[k] += 1
    return out


def sort_intervals(inst: Instance) -> list[Interval]:
    """Intervals by increasing right endpoint, then left endpoint, then variable order.

    Two stable counting-sort passes over universe positions; the input is
    listed in variable order so the residual tie rule comes for free.
    """
    m = len(inst.universe)
    idx = inst.index
    ivls = inst.intervals()
    ivls = counting_sort(ivls, lambda iv: idx(iv.lo), m)
    return counting_sort(ivls, lambda iv: idx(iv.hi), m)
