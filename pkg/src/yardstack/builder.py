"""Randomized construction of feasible stowage plans."""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .feasibility import DEFAULT_RULES, PartialYard, Rules
from .model import ALL_TYPES, ConstructionError, Instance, Slot, StowagePlan

MAX_RESTARTS = 50

_TYPE_CODES = tuple(int(t) for t in ALL_TYPES)


def make_rng(seed) -> random.Random:
    return random.Random(seed)


def _plan_from(partial: PartialYard, n: int) -> StowagePlan:
    slots: list[Optional[Slot]] = [None] * n
    yard = partial.yard
    for i, cid in enumerate(partial.ids):
        if cid is not None:
            slots[cid] = yard.slot(i)
    return StowagePlan(tuple(slots))


def _dead_end(partial: PartialYard, pools: dict[int, list[int]]) -> bool:
    for t, pool in pools.items():
        if pool and any(partial.top_ok(t, s) for s in range(len(partial.heights))):
            return False
    return True


def _sweep_construct(inst: Instance, rng: random.Random, rules: Rules) -> Optional[StowagePlan]:
    yard = inst.yard
    partial = PartialYard(yard, rules)
    pools: dict[int, list[int]] = {t: [] for t in _TYPE_CODES}
    for c in inst.containers:
        pools[int(c.ctype)].append(c.id)
    remaining = len(inst.containers)
    n3 = yard.n3
    types = partial.types
    while remaining:
        placed = 0
        for stack in range(yard.n_stacks):
            base = stack * n3
            for z in range(n3):
                i = base + z
                if types[i]:
                    continue
                # A draw of a type with nothing left to store leaves the slot empty this sweep.
                t = rng.choice(_TYPE_CODES)
                pool = pools[t]
                if not pool or not partial.ok(t, i):
                    continue
                k = rng.randrange(len(pool))
                pool[k], pool[-1] = pool[-1], pool[k]
                partial.place(pool.pop(), t, i)
                placed += 1
                remaining -= 1
        if remaining and not placed and _dead_end(partial, pools):
            return None
    return _plan_from(partial, len(inst.containers))


def create_solution(inst: Instance, rng: random.Random, rules: Rules = DEFAULT_RULES,
                    max_restarts: int = MAX_RESTARTS) -> StowagePlan:
    """Random feasible plan built by repeated (block, x, y, z) slot sweeps.

    At each empty slot a container type is drawn uniformly from the six codes
    and, if any container of that type is still unstored and the slot accepts
    that type, a uniformly random unstored container of it is placed there.
    Sweeps repeat until everything is stored. When no remaining container fits
    anywhere the construction restarts from an empty yard.
    """
    for _ in range(max_restarts + 1):
        plan = _sweep_construct(inst, rng, rules)
        if plan is not None:
            return plan
    raise ConstructionError(
        f"no feasible construction after {max_restarts} restarts", range(len(inst.containers)))


def realize(inst: Instance, order: Sequence[int], targets: Sequence[Optional[Slot]],
            rng: random.Random, rules: Rules = DEFAULT_RULES) -> Optional[StowagePlan]:
    """Build a feasible plan that keeps as many target slots as possible.

    Containers with a target are placed first, lowest target level first, ties
    in ``order``; those without a target follow in ``order``. A container whose
    target is taken or infeasible goes to a uniformly random feasible stack top.
    Returns None if some container has no feasible slot left.
    """
    yard = inst.yard
    cs = inst.containers
    ranked = sorted((targets[c].z, k, c) for k, c in enumerate(order) if targets[c] is not None)
    sequence = [c for _, _, c in ranked] + [c for c in order if targets[c] is None]
    partial = PartialYard(yard, rules)
    for cid in sequence:
        t = int(cs[cid].ctype)
        target = targets[cid]
        if target is not None:
            i = yard.index(target)
            if partial.ok(t, i):
                partial.place(cid, t, i)
                continue
        stacks = partial.open_stacks(t)
        if not stacks:
            return None
        partial.place_on(cid, t, rng.choice(stacks))
    return _plan_from(partial, len(cs))


def swap_candidates(inst: Instance) -> list[list[int]]:
    """Groups of container ids sharing a type, only groups of two or more."""
    groups: dict[int, list[int]] = {}
    for c in inst.containers:
        groups.setdefault(int(c.ctype), []).append(c.id)
    return [g for g in groups.values() if len(g) > 1]


def random_same_type_pair(inst: Instance, rng: random.Random,
                          groups: Optional[list[list[int]]] = None) -> Optional[tuple[int, int]]:
    """Two distinct uniformly random containers of one type, or None if no type repeats.

    The first container is uniform over all containers whose type repeats.
    """
    groups = swap_candidates(inst) if groups is None else groups
    if not groups:
        return None
    pick = rng.randrange(sum(len(g) for g in groups))
    for g in groups:
        if pick < len(g):
            a = g[pick]
            b = g[rng.randrange(len(g) - 1)]
            if b == a:
                b = g[-1]
            return a, b
        pick -= len(g)
    raise AssertionError("unreachable")
