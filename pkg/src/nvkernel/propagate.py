"""Hyper-arc consistency for AtMost-NValue through per-value consistency checks."""

from __future__ import annotations

from dataclasses import dataclass, field

from ._state import WorkState
from .kernel import select_value
from .model import Instance, ValueId
from .solver import is_consistent


@dataclass
class PropagationResult:
    filtered_instance: Instance | None      # None on global failure
    removed_values: list[int] = field(default_factory=list)
    checks_performed: int = 0

    @property
    def failed(self) -> bool:
        return self.filtered_instance is None


def has_support(inst: Instance, v, prune: bool = True) -> bool:
    """True when some solution uses value v."""
    label = v.label if isinstance(v, ValueId) else v
    inst.index(label)
    return is_consistent(select_value(inst, label), prune=prune)


def enforce_hac(inst: Instance, prune: bool = True) -> PropagationResult:
    checks = 1
    if not is_consistent(inst, prune=prune):
        return PropagationResult(None, list(inst.universe), checks)
    checks += 1
    if is_consistent(inst.with_budget(inst.budget - 1), prune=prune):
        return PropagationResult(inst, [], checks)

    unsupported = []
    for v in inst.universe:
        checks += 1
        if not has_support(inst, v, prune):
            unsupported.append(v)
    if not unsupported:
        return PropagationResult(inst, [], checks)
    # supports are computed on the input, then every unsupported value goes at once
    st = WorkState(inst)
    for v in unsupported:
        st.remove_value(inst.index(v))
    return PropagationResult(st.to_instance(), unsupported, checks)
