"""Seeded random instances with an exact number of holes.

Every variable draws from its own child stream of the seed, so adding
variables leaves the shapes of the existing ones unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Instance, VarDomain

_ALLOC_STREAM = 2 ** 32


@dataclass(frozen=True)
class GenParams:
    vars: int
    universe_size: int
    holes: int
    budget: int
    seed: int = 0
    interval_len: tuple[int, int] = (1, 3)

    def check(self) -> None:
        if self.vars < 0 or self.universe_size < 1 or self.holes < 0:
            raise ValueError("vars, values and holes must be non-negative (values >= 1)")
        lo, hi = self.interval_len
        if not 1 <= lo <= hi:
            raise ValueError(f"bad interval length range {self.interval_len}")
        if self.holes > self.vars * ((self.universe_size - 1) // 2):
            raise ValueError(
                f"{self.holes} holes do not fit in {self.vars} variables over {self.universe_size} values")


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def _allocate(p: GenParams) -> list[int]:
    cap = (p.universe_size - 1) // 2
    holes = [0] * p.vars
    rng = _rng(p.seed, _ALLOC_STREAM)
    for _ in range(p.holes):
        open_vars = [j for j in range(p.vars) if holes[j] < cap]
        holes[open_vars[int(rng.integers(len(open_vars)))]] += 1
    return holes


def _draw_domain(rng: np.random.Generator, h: int, m: int, len_range) -> list[tuple[int, int]]:
    """h + 1 disjoint runs over positions 0..m-1 with at least one gap value between runs."""
    lo_len, hi_len = len_range
    lens = [int(rng.integers(lo_len, hi_len + 1)) for _ in range(h + 1)]
    while sum(lens) + h > m:
        j = max(range(h + 1), key=lambda t: lens[t])
        lens[j] -= 1
    slack = m - sum(lens) - h
    cuts = sorted(int(c) for c in rng.integers(0, slack + 1, size=h + 1))
    extra = [cuts[0]] + [cuts[t] - cuts[t - 1] for t in range(1, h + 1)]
    runs = []
    pos = extra[0]
    for t in range(h + 1):
        runs.append((pos, pos + lens[t] - 1))
        pos += lens[t] + 1
        if t + 1 <= h:
            pos += extra[t + 1]
    return runs


def gen_random(p: GenParams) -> Instance:
    p.check()
    m = p.universe_size
    universe = tuple(range(1, m + 1))
    doms = []
    for j, h in enumerate(_allocate(p)):
        runs = _draw_domain(_rng(p.seed, j), h, m, p.interval_len)
        doms.append(VarDomain(f"x{j + 1}", tuple((a + 1, b + 1) for a, b in runs)))
    return Instance(universe, p.budget, tuple(doms))


def random_suite(count: int, seed: int = 0, max_vars: int = 10, max_values: int = 12,
                 max_holes: int = 6, interval_len=(1, 3)) -> list[Instance]:
    """Small mixed instances for oracle cross-checks; budgets range over 1..n."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(_ALLOC_STREAM + 1,)))
    out = []
    for t in range(count):
        n = int(rng.integers(1, max_vars + 1))
        m = int(rng.integers(3, max_values + 1))
        k = int(rng.integers(0, min(max_holes, n * ((m - 1) // 2)) + 1))
        budget = int(rng.integers(1, n + 1))
        out.append(gen_random(GenParams(n, m, k, budget, seed=seed * 100003 + t,
                                        interval_len=interval_len)))
    return out
