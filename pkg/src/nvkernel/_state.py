"""Mutable working representation shared by the kernelizer and the search.

Values are addressed by their position in the universe the state was built
from; discarded positions stay addressable (position order equals value
order) but are unlinked from the alive list. An interval's current left
endpoint only ever moves right over dead positions, so "original left
endpoint <= p <= current right endpoint" is an exact containment test for an
alive position p. The stabbing tree relies on that.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right
from dataclasses import dataclass, field

from .model import Instance, Interval, VarDomain, counting_sort
from .trace import (COLLATERAL, MERGE_DROP, RED_SUBSET, Discarded, MergeBatch,
                    MergePair, Selected, VarRemoved)


class KernelInvariantError(RuntimeError):
    """An internal invariant of the reduction was violated."""


class EmptyDomainError(RuntimeError):
    pass


@dataclass
class ScanStats:
    leaders: int = 0
    max_followers: int = 0
    merges: int = 0
    followers: dict = field(default_factory=dict)


class WorkState:
    def __init__(self, inst: Instance, trace: list | None = None):
        labels = list(inst.universe)
        m = len(labels)
        self.labels = labels
        self.alive_val = [True] * m
        self.prev = list(range(-1, m - 1))
        self.next = list(range(1, m + 1))
        if m:
            self.next[m - 1] = -1
        self.head = 0 if m else -1
        self.n_vals = m
        pos = inst.index

        self.names = [d.name for d in inst.domains]
        self.var_alive = [True] * len(self.names)
        self.var_ivls: list[list[int]] = []
        lo, hi, ivar = [], [], []
        for j, d in enumerate(inst.domains):
            ids = []
            for a, b in d.intervals:
                ids.append(len(lo))
                lo.append(pos(a))
                hi.append(pos(b))
                ivar.append(j)
            self.var_ivls.append(ids)
        self.lo, self.hi, self.ivar = lo, hi, ivar
        self.ialive = [True] * len(lo)
        self.n_ivls = len(lo)
        self.n_vars = len(self.names)
        self.starts = [set() for _ in range(m)]
        self.ends = [set() for _ in range(m)]
        for i in range(len(lo)):
            self.starts[lo[i]].add(i)
            self.ends[hi[i]].add(i)
        self.multi = {j for j, ids in enumerate(self.var_ivls) if len(ids) > 1}
        self.budget = inst.budget
        self.trace = trace if trace is not None else []
        self.selected: list[int] = []

        # max-tree over intervals ordered by their original left endpoint
        order = counting_sort(list(range(len(lo))), lo.__getitem__, max(m, 1))
        self.tree_lo = [lo[i] for i in order]
        size = 1
        while size < max(len(order), 1):
            size *= 2
        self.tsize = size
        tree = [-1] * (2 * size)
        self.tpos = [0] * len(lo)
        for k, i in enumerate(order):
            self.tpos[i] = k
            tree[size + k] = hi[i]
        for k in range(size - 1, 0, -1):
            tree[k] = max(tree[2 * k], tree[2 * k + 1])
        self.tree = tree

        self.dom_heap = list(range(m))
        self.in_dom = [True] * m
        self.unit_heap = list(range(len(self.names)))
        self.in_unit = [True] * len(self.names)

    def copy(self) -> WorkState:
        new = object.__new__(WorkState)
        d = new.__dict__
        for key, val in self.__dict__.items():
            if isinstance(val, list):
                d[key] = val[:]
            elif isinstance(val, set):
                d[key] = set(val)
            else:
                d[key] = val
        d["var_ivls"] = [ids[:] for ids in self.var_ivls]
        d["starts"] = [set(s) for s in self.starts]
        d["ends"] = [set(s) for s in self.ends]
        d["trace"] = []
        d["selected"] = []
        return new

    # ---------------------------------------------------------------- queries

    @property
    def holes(self) -> int:
        return self.n_ivls - self.n_vars

    def alive_values(self):
        p = self.head
        while p != -1:
            yield p
            p = self.next[p]

    def alive_intervals(self) -> list[int]:
        """Alive interval ids in variable order, each variable's intervals by position."""
        return [i for j, ids in enumerate(self.var_ivls) if self.var_alive[j] for i in ids]

    def is_optional(self, i: int) -> bool:
        return len(self.var_ivls[self.ivar[i]]) > 1

    def snapshot(self, i: int) -> Interval:
        return Interval(self.names[self.ivar[i]], self.labels[self.lo[i]], self.labels[self.hi[i]])

    def sorted_intervals(self) -> list[int]:
        """Alive intervals by (right endpoint, left endpoint, variable order)."""
        m = max(len(self.labels), 1)
        ivls = counting_sort(self.alive_intervals(), self.lo.__getitem__, m)
        return counting_sort(ivls, self.hi.__getitem__, m)

    def first_interval(self) -> int:
        return min(self.alive_intervals(), key=lambda i: (self.hi[i], self.lo[i], self.ivar[i]))

    def stab(self, p: int) -> list[int]:
        """Alive intervals containing the alive position p."""
        cnt = bisect_right(self.tree_lo, p)
        tree, size = self.tree, self.tsize
        out = []
        stack = [(1, 0, size)]
        while stack:
            node, a, b = stack.pop()
            if a >= cnt or tree[node] < p:
                continue
            if node >= size:
                out.append(node - size)
                continue
            mid = (a + b) // 2
            stack.append((2 * node + 1, mid, b))
            stack.append((2 * node, a, mid))
        return [self._tree_ids[k] for k in out]

    @property
    def _tree_ids(self):
        inv = self.__dict__.get("_tree_inv")
        if inv is None:
            inv = [0] * len(self.tpos)
            for i, k in enumerate(self.tpos):
                inv[k] = i
            self.__dict__["_tree_inv"] = inv
        return inv

    def to_instance(self) -> Instance:
        universe = tuple(self.labels[p] for p in self.alive_values())
        lab = self.labels
        doms = tuple(
            VarDomain(self.names[j], tuple((lab[self.lo[i]], lab[self.hi[i]]) for i in ids))
            for j, ids in enumerate(self.var_ivls) if self.var_alive[j])
        return Instance(universe, self.budget, doms)

    # ------------------------------------------------------------ bookkeeping

    def _touch(self, p: int) -> None:
        for q in (p, self.next[p]):
            if q != -1 and self.alive_val[q] and not self.in_dom[q]:
                self.in_dom[q] = True
                heapq.heappush(self.dom_heap, q)

    def _touch_var(self, j: int) -> None:
        if self.var_alive[j] and not self.in_unit[j]:
            self.in_unit[j] = True
            heapq.heappush(self.unit_heap, j)

    def _tree_set(self, i: int, val: int) -> None:
        k = self.tpos[i] + self.tsize
        tree = self.tree
        tree[k] = val
        k //= 2
        while k:
            v = max(tree[2 * k], tree[2 * k + 1])
            if tree[k] == v:
                break
            tree[k] = v
            k //= 2

    def _set_hi(self, i: int, p: int) -> None:
        old = self.hi[i]
        self.ends[old].discard(i)
        self.ends[p].add(i)
        self.hi[i] = p
        self._tree_set(i, p)
        self._touch(old)
        self._touch(p)
        self._touch_var(self.ivar[i])

    def _set_lo(self, i: int, p: int) -> None:
        old = self.lo[i]
        self.starts[old].discard(i)
        self.starts[p].add(i)
        self.lo[i] = p
        self._touch(old)
        self._touch(p)
        self._touch_var(self.ivar[i])

    def _kill(self, i: int) -> None:
        self.ialive[i] = False
        self.starts[self.lo[i]].discard(i)
        self.ends[self.hi[i]].discard(i)
        self._tree_set(i, -1)
        self._touch(self.lo[i])
        self._touch(self.hi[i])
        self.n_ivls -= 1
        j = self.ivar[i]
        ids = self.var_ivls[j]
        ids.remove(i)
        if len(ids) <= 1:
            self.multi.discard(j)
        self._touch_var(j)

    def _unlink(self, p: int) -> None:
        pv, nx = self.prev[p], self.next[p]
        self.alive_val[p] = False
        self.n_vals -= 1
        if pv != -1:
            self.next[pv] = nx
        else:
            self.head = nx
        if nx != -1:
            self.prev[nx] = pv
        if pv != -1:
            self._touch(pv)
        if nx != -1:
            self._touch(nx)
        if pv != -1 and nx != -1:
            self._coalesce(pv, nx)

    def _coalesce(self, pv: int, nx: int) -> None:
        # runs of one variable separated only by the unlinked value become one
        for j in list(self.multi):
            ids = self.var_ivls[j]
            for a, b in zip(ids, ids[1:]):
                if self.hi[a] == pv and self.lo[b] == nx:
                    new_hi = self.hi[b]
                    self._kill(b)
                    self._set_hi(a, new_hi)
                    break

    # ------------------------------------------------------------ primitives

    def remove_var(self, j: int, rule: str = RED_SUBSET) -> None:
        for i in list(self.var_ivls[j]):
            self._kill(i)
        self.var_alive[j] = False
        self.n_vars -= 1
        self.trace.append(VarRemoved(self.names[j], rule))

    def remove_interval(self, i: int) -> None:
        if len(self.var_ivls[self.ivar[i]]) < 2:
            raise EmptyDomainError(f"cannot remove the only interval of {self.names[self.ivar[i]]}")
        self._kill(i)

    def remove_value(self, p: int) -> None:
        """Delete position p from every domain and from the universe."""
        for i in list(self.starts[p]):
            if self.hi[i] == p:
                j = self.ivar[i]
                self._kill(i)
                if not self.var_ivls[j]:
                    raise EmptyDomainError(f"domain of {self.names[j]} became empty")
            else:
                self._set_lo(i, self.next[p])
        for i in list(self.ends[p]):
            self._set_hi(i, self.prev[p])
        self._unlink(p)

    def discard(self, p: int) -> None:
        self.remove_value(p)
        self.trace.append(Discarded(self.labels[p]))

    def select(self, p: int) -> None:
        hit = sorted({self.ivar[i] for i in self.stab(p)})
        self.budget -= 1
        self.trace.append(Selected(self.labels[p]))
        self.selected.append(self.labels[p])
        for j in hit:
            self.remove_var(j, COLLATERAL)
        self._unlink(p)

    # ------------------------------------------------------------------ rules

    def _dominated(self, p: int) -> bool:
        if not self.ends[p]:
            return True
        pv = self.prev[p]
        return pv != -1 and not self.starts[p] and bool(self.ends[pv])

    def dom_fixpoint(self) -> bool:
        """Discard dominated values, smallest pending position first.

        Dominance is local: if every interval containing v' contains some
        other value v, it contains the neighbour of v' on v's side. Equal
        interval sets keep the larger value.
        """
        fired = False
        heap = self.dom_heap
        while heap:
            p = heapq.heappop(heap)
            self.in_dom[p] = False
            if self.alive_val[p] and self._dominated(p):
                self.discard(p)
                fired = True
        return fired

    def unit_round(self) -> bool:
        fired = False
        heap = self.unit_heap
        while heap:
            j = heapq.heappop(heap)
            self.in_unit[j] = False
            if not self.var_alive[j]:
                continue
            ids = self.var_ivls[j]
            if len(ids) == 1 and self.lo[ids[0]] == self.hi[ids[0]]:
                self.select(self.lo[ids[0]])
                fired = True
        return fired

    def dom_unit_fixpoint(self) -> None:
        while True:
            self.dom_fixpoint()
            if not self.unit_round():
                break

    def red_subset(self) -> bool:
        """Remove every variable owning an interval that contains a required interval."""
        lo, hi, ivar = self.lo, self.hi, self.ivar
        by_hi: dict[int, list[int]] = {}
        for i in self.alive_intervals():
            by_hi.setdefault(hi[i], []).append(i)
        top: list[tuple] = []   # two best required candidates: (-lo, hi, var, id)
        doomed = set()
        for p in self.alive_values():
            bucket = by_hi.get(p)
            if not bucket:
                continue
            for i in bucket:
                if len(self.var_ivls[ivar[i]]) == 1:
                    top.append((-lo[i], hi[i], ivar[i], i))
            if len(top) > 2:
                top.sort()
                del top[2:]
            else:
                top.sort()
            for i in bucket:
                c = next((t[3] for t in top if t[3] != i), None)
                if c is None or lo[c] < lo[i]:
                    continue
                if lo[c] != lo[i] or hi[c] != hi[i]:
                    doomed.add(ivar[i])
                elif len(self.var_ivls[ivar[i]]) > 1 or ivar[c] < ivar[i]:
                    doomed.add(ivar[i])
        for j in sorted(doomed):
            self.remove_var(j, RED_SUBSET)
        return bool(doomed)

    def apply_rules(self) -> None:
        settled = False
        while True:
            fired = self.red_subset()
            if settled and not fired:
                return
            self.dom_unit_fixpoint()
            settled = True

    # ---------------------------------------------------------- scan & merge

    def scan_and_merge(self, strict: bool = False) -> ScanStats:
        lo, hi = self.lo, self.hi
        order = self.sorted_intervals()
        leaders: list[int] = []
        followers: dict[int, list[int]] = {}
        leaders_of: dict[int, set[int]] = {}
        stats = ScanStats()
        leader_mode = True
        prev_span = None
        for cur in order:
            if not self.ialive[cur]:
                continue
            span = (lo[cur], hi[cur])
            optional = self.is_optional(cur)
            if optional or leader_mode:
                leaders.append(cur)
                followers[cur] = []
                leader_mode = optional
                prev_span = span
                continue

            p_lo = prev_span[0]
            popular = [L for L in leaders
                       if hi[L] >= p_lo or (followers[L] and hi[followers[L][-1]] >= p_lo)]
            mine = set()
            for L in popular:
                fl = followers[L]
                if hi[L] < lo[cur] and (not fl or hi[fl[-1]] < lo[cur]):
                    fl.append(cur)
                    mine.add(L)
            if not mine:
                raise KernelInvariantError(
                    f"scanned required interval {self.snapshot(cur)} acquired no leader")
            leaders_of[cur] = mine
            if strict:
                self._check_scan(leaders, followers)

            if popular and all(len(followers[L]) >= 2 for L in popular):
                self._merge(popular, followers, leaders_of)
                stats.merges += 1
                if strict:
                    self._check_scan(leaders, followers)
            prev_span = span

        stats.leaders = len(leaders)
        stats.followers = {self.snapshot(L): len(followers[L]) for L in leaders}
        stats.max_followers = max((len(f) for f in followers.values()), default=0)
        return stats

    def _merge(self, popular, followers, leaders_of) -> None:
        pairs = []
        targets: dict[int, int] = {}
        dropped: list[int] = []
        for L in popular:
            kept, last = followers[L][-2], followers[L][-1]
            pairs.append(MergePair(self.snapshot(L), self.snapshot(kept), self.snapshot(last),
                                   self.labels[self.hi[last]]))
            targets[kept] = max(targets.get(kept, -1), self.hi[last])
            if last not in dropped:
                dropped.append(last)
        if set(targets) & set(dropped):
            raise KernelInvariantError("a merge would both extend and drop the same follower")
        old = self.budget
        self.budget -= 1
        self.trace.append(MergeBatch(old, self.budget, tuple(pairs)))
        for last in dropped:
            for L in leaders_of.pop(last, ()):
                followers[L].remove(last)
            self.remove_var(self.ivar[last], MERGE_DROP)
        for kept, new_hi in targets.items():
            self._set_hi(kept, new_hi)

    def _check_scan(self, leaders, followers) -> None:
        lo, hi = self.lo, self.hi
        for L in leaders:
            fl = followers[L]
            for f in fl:
                if not (hi[L] < lo[f] or hi[f] < lo[L]):
                    raise KernelInvariantError("a follower intersects its leader")
            for a, b in zip(fl, fl[1:]):
                if hi[a] >= lo[b]:
                    raise KernelInvariantError("two followers of one leader intersect")

    # ------------------------------------------------------------- solving

    def greedy(self) -> list[int]:
        """Right-endpoint piercing of a hole-free state; returns chosen labels."""
        chosen = []
        last = -1
        for i in self.sorted_intervals():
            if self.lo[i] > last:
                last = self.hi[i]
                chosen.append(self.labels[last])
        return chosen
