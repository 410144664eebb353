"""Reading and writing the line-oriented instance format.

    atmost-nvalue 1
    values range 1 14          # or: values list 4 6 9 10
    n 6
    var x1 1-2
    var x2 2-3 10-10
"""

from __future__ import annotations

import re

from .model import Instance, InstanceError, VarDomain

MAGIC = "atmost-nvalue"
VERSION = "1"

_IVL = re.compile(r"^(-?\d+)-(-?\d+)$")


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"expected an integer, got {tok!r}") from None


def parse_instance(text: str) -> Instance:
    universe = None
    budget = None
    domains: list[VarDomain] = []
    names: set[str] = set()
    index: dict[int, int] = {}
    seen_magic = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if not seen_magic:
            if toks != [MAGIC, VERSION]:
                raise ParseError(lineno, f"expected header '{MAGIC} {VERSION}'")
            seen_magic = True
            continue
        head = toks[0]
        if head == "values":
            if universe is not None:
                raise ParseError(lineno, "duplicate values declaration")
            if len(toks) < 2 or toks[1] not in ("range", "list"):
                raise ParseError(lineno, "expected 'values range <lo> <hi>' or 'values list ...'")
            if toks[1] == "range":
                if len(toks) != 4:
                    raise ParseError(lineno, "'values range' takes two integers")
                lo, hi = _int(toks[2], lineno), _int(toks[3], lineno)
                if lo > hi:
                    raise ParseError(lineno, "empty value range")
                universe = tuple(range(lo, hi + 1))
            else:
                universe = tuple(_int(t, lineno) for t in toks[2:])
                if any(b <= a for a, b in zip(universe, universe[1:])):
                    raise ParseError(lineno, "value list must be strictly increasing")
            index = {v: i for i, v in enumerate(universe)}
        elif head == "n":
            if budget is not None:
                raise ParseError(lineno, "duplicate budget declaration")
            if len(toks) != 2:
                raise ParseError(lineno, "expected 'n <N>'")
            # negative budgets only arise in written-out kernels of inconsistent inputs
            budget = _int(toks[1], lineno)
        elif head == "var":
            if universe is None:
                raise ParseError(lineno, "variable declared before the values line")
            if len(toks) < 2:
                raise ParseError(lineno, "missing variable name")
            name = toks[1]
            if name in names:
                raise ParseError(lineno, f"duplicate variable {name!r}")
            if len(toks) == 2:
                raise ParseError(lineno, f"variable {name!r} has an empty domain")
            ivls = []
            for tok in toks[2:]:
                m = _IVL.match(tok)
                if not m:
                    raise ParseError(lineno, f"malformed interval {tok!r}")
                lo, hi = int(m.group(1)), int(m.group(2))
                if lo not in index or hi not in index:
                    raise ParseError(lineno, f"interval {tok} has an endpoint outside the universe")
                if lo > hi:
                    raise ParseError(lineno, f"interval {tok} has reversed endpoints")
                if ivls and index[lo] <= index[ivls[-1][1]] + 1:
                    raise ParseError(lineno, f"interval {tok} overlaps or touches the previous one")
                ivls.append((lo, hi))
            names.add(name)
            domains.append(VarDomain(name, tuple(ivls)))
        else:
            raise ParseError(lineno, f"unknown declaration {head!r}")

    if not seen_magic:
        raise ParseError(1, f"missing header '{MAGIC} {VERSION}'")
    if universe is None:
        raise ParseError(lineno if text else 1, "missing values declaration")
    if budget is None:
        raise ParseError(lineno, "missing budget declaration 'n <N>'")
    try:
        return Instance(universe, budget, tuple(domains))
    except InstanceError as exc:  # pragma: no cover - parse checks above are stricter
        raise ParseError(lineno, str(exc)) from None


def serialize_instance(inst: Instance) -> str:
    u = inst.universe
    lines = [f"{MAGIC} {VERSION}"]
    if u and u[-1] - u[0] == len(u) - 1:
        lines.append(f"values range {u[0]} {u[-1]}")
    else:
        lines.append(" ".join(["values list", *map(str, u)]))
    lines.append(f"n {inst.budget}")
    for d in inst.domains:
        lines.append(" ".join(["var", d.name, *(f"{lo}-{hi}" for lo, hi in d.intervals)]))
    return "\n".join(lines) + "\n"


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(inst))
