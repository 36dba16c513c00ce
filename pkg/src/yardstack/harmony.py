"""Harmony search over discrete stowage plans.

Each container's slot is one decision variable. An improvisation picks one
memory row and, per container, keeps that row's slot with probability HMCR or
draws a random feasible slot otherwise. Pitch adjustment swaps the slots of
two containers of the same type, which never changes the type layout of the
yard and therefore keeps the plan feasible.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Optional

from .builder import MAX_RESTARTS, create_solution, random_same_type_pair, realize, swap_candidates
from .feasibility import DEFAULT_RULES, Rules
from .model import ConstructionError, Instance, StowagePlan, ValidationError
from .objective import Fitness, evaluate


@dataclass(frozen=True)
class HsParams:
    """``n_iter_stall`` counts iterations of ``hms`` improvisations each; the
    search stops after that many consecutive iterations in which neither the
    best plan nor the memory improved."""

    hms: int = 30
    hmcr: float = 0.95
    par: float = 0.1
    n_iter_stall: int = 20
    max_improvisations: int = 100_000
    bw_swaps: int = 1

    def __post_init__(self):
        if self.hms < 1:
            raise ValidationError("hms must be >= 1")
        if not (0.0 <= self.hmcr <= 1.0 and 0.0 <= self.par <= 1.0):
            raise ValidationError("hmcr and par must lie in [0, 1]")
        if self.n_iter_stall < 1 or self.max_improvisations < 1 or self.bw_swaps < 1:
            raise ValidationError("n_iter_stall, max_improvisations and bw_swaps must be >= 1")


@dataclass
class HarmonyMemory:
    entries: list[tuple[StowagePlan, Fitness]]
    worst_index: int = field(init=False)

    def __post_init__(self):
        if not self.entries:
            raise ValidationError("harmony memory cannot be empty")
        self.refresh()

    def refresh(self) -> None:
        totals = [f.total for _, f in self.entries]
        self.worst_index = totals.index(max(totals))

    @property
    def worst(self) -> Fitness:
        return self.entries[self.worst_index][1]

    def best(self) -> tuple[StowagePlan, Fitness]:
        totals = [f.total for _, f in self.entries]
        return self.entries[totals.index(min(totals))]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class SolveResult:
    best_plan: StowagePlan
    best_fitness: Fitness
    f_initial: int
    f_final: int
    improvisations: int
    elapsed: float


def init_memory(inst: Instance, params: HsParams, rng: random.Random,
                rules: Rules = DEFAULT_RULES) -> HarmonyMemory:
    entries = []
    for _ in range(params.hms):
        plan = create_solution(inst, rng, rules)
        entries.append((plan, evaluate(plan, inst)))
    return HarmonyMemory(entries)


def pitch_adjust(plan: StowagePlan, inst: Instance, rng: random.Random, swaps: int,
                 groups: Optional[list[list[int]]] = None) -> StowagePlan:
    groups = swap_candidates(inst) if groups is None else groups
    for _ in range(swaps):
        pair = random_same_type_pair(inst, rng, groups)
        if pair is None:
            break
        plan = plan.swapped(*pair)
    return plan


def improvise(memory: HarmonyMemory, inst: Instance, params: HsParams, rng: random.Random,
              rules: Rules = DEFAULT_RULES) -> StowagePlan:
    n = len(inst.containers)
    for _ in range(MAX_RESTARTS + 1):
        order = list(range(n))
        rng.shuffle(order)
        row = memory.entries[rng.randrange(len(memory))][0].slots
        targets = [None] * n
        for cid in order:
            if rng.random() < params.hmcr:
                targets[cid] = row[cid]
        plan = realize(inst, order, targets, rng, rules)
        if plan is not None:
            break
    else:
        raise ConstructionError(f"improvisation failed after {MAX_RESTARTS} restarts")
    if rng.random() < params.par:
        plan = pitch_adjust(plan, inst, rng, params.bw_swaps)
    return plan


def update_memory(memory: HarmonyMemory, candidate: tuple[StowagePlan, Fitness]) -> bool:
    """Replace the worst entry if the candidate is strictly better."""
    if candidate[1].total >= memory.worst.total:
        return False
    memory.entries[memory.worst_index] = candidate
    memory.refresh()
    return True


def solve(inst: Instance, params: HsParams, rng: random.Random, deadline: Optional[float] = None,
          rules: Rules = DEFAULT_RULES, memory: Optional[HarmonyMemory] = None) -> SolveResult:
    """Run harmony search until stall, cap, deadline, or a zero-rehandle plan.

    ``deadline`` is an absolute ``time.perf_counter()`` value.
    """
    start = time.perf_counter()
    if memory is None:
        memory = init_memory(inst, params, rng, rules)
    best_plan, best_fit = memory.best()
    f_initial = best_fit.total
    stall = 0
    count = 0

    def running() -> bool:
        return (best_fit.total > 0 and count < params.max_improvisations
                and (deadline is None or time.perf_counter() < deadline))

    while stall < params.n_iter_stall and running():
        improved = False
        for _ in range(len(memory)):
            plan = improvise(memory, inst, params, rng, rules)
            fit = evaluate(plan, inst)
            count += 1
            improved |= update_memory(memory, (plan, fit))
            if fit.total < best_fit.total:
                best_plan, best_fit = plan, fit
            if not running():
                break
        stall = 0 if improved else stall + 1
    return SolveResult(best_plan, best_fit, f_initial, best_fit.total, count,
                       time.perf_counter() - start)
