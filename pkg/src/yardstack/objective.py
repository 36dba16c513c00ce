"""Rehandle-count fitness.

A container is blocked by every container above it in the same stack that
departs strictly later; the plan's fitness is the total over all containers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Instance, StowagePlan, stack_above


@dataclass(frozen=True)
class Fitness:
    total: int
    per_container: tuple[int, ...]


def blocking_count(plan: StowagePlan, inst: Instance, cid: int) -> int:
    d = inst.container(cid).departure
    cs = inst.containers
    return sum(1 for j in stack_above(plan, inst, cid) if cs[j].departure > d)


def _stacks(plan: StowagePlan, inst: Instance) -> dict[int, list[int]]:
    yard = inst.yard
    n3 = yard.n3
    stacks: dict[int, list[int]] = {}
    for cid, slot in enumerate(plan.slots):
        stacks.setdefault(yard.index(slot) // n3, []).append(cid)
    return stacks


def _count_stack(members: list[int], plan: StowagePlan, inst: Instance, out: list[int]) -> None:
    cs = inst.containers
    members = sorted(members, key=lambda c: plan.slots[c].z)
    deps = [cs[c].departure for c in members]
    for k, cid in enumerate(members):
        d = deps[k]
        out[cid] = sum(1 for e in deps[k + 1:] if e > d)


def evaluate(plan: StowagePlan, inst: Instance) -> Fitness:
    """Fitness of a total, injective plan; feasibility is not required."""
    per = [0] * len(inst.containers)
    for members in _stacks(plan, inst).values():
        _count_stack(members, plan, inst, per)
    return Fitness(sum(per), tuple(per))


def evaluate_swap(plan: StowagePlan, inst: Instance, fitness: Fitness,
                  a: int, b: int) -> tuple[StowagePlan, Fitness]:
    """Swap the slots of containers a and b; only the two affected stacks are recounted."""
    new = plan.swapped(a, b)
    yard = inst.yard
    n3 = yard.n3
    touched = {yard.index(new.slots[a]) // n3, yard.index(new.slots[b]) // n3}
    members: dict[int, list[int]] = {s: [] for s in touched}
    for cid, slot in enumerate(new.slots):
        s = yard.index(slot) // n3
        if s in members:
            members[s].append(cid)
    per = list(fitness.per_container)
    total = fitness.total
    for group in members.values():
        before = sum(per[c] for c in group)
        _count_stack(group, new, inst, per)
        total += sum(per[c] for c in group) - before
    return new, Fitness(total, tuple(per))
