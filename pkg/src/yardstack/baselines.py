"""Comparison solvers: a genetic algorithm and the LIFO stacking rule."""

from __future__ import annotations

import bisect
import itertools
import random
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .builder import MAX_RESTARTS, create_solution, random_same_type_pair, realize, swap_candidates
from .feasibility import DEFAULT_RULES, PartialYard, Rules
from .harmony import SolveResult
from .model import ConstructionError, Instance, Slot, StowagePlan, ValidationError
from .objective import Fitness, evaluate


@dataclass(frozen=True)
class GaParams:
    population_size: int = 30
    generations_stall: int = 20
    max_generations: int = 10_000
    crossover_rate: float = 0.9
    mutation_rate: float = 0.1

    def __post_init__(self):
        if self.population_size < 2:
            raise ValidationError("population_size must be >= 2")
        if self.generations_stall < 1 or self.max_generations < 1:
            raise ValidationError("generations_stall and max_generations must be >= 1")
        if not (0.0 <= self.crossover_rate <= 1.0 and 0.0 <= self.mutation_rate <= 1.0):
            raise ValidationError("crossover_rate and mutation_rate must lie in [0, 1]")


Individual = tuple[StowagePlan, Fitness]


def roulette_weights(totals: Sequence[int]) -> list[int]:
    """Minimization weights: worst total minus own total, plus one."""
    worst = max(totals)
    return [worst - t + 1 for t in totals]


def roulette_pick(cumulative: Sequence[int], rng: random.Random) -> int:
    return bisect.bisect_right(cumulative, rng.randrange(cumulative[-1]))


def two_point_crossover(a: Sequence[Slot], b: Sequence[Slot], rng: random.Random
                        ) -> tuple[list[Slot], list[Slot]]:
    """Exchange the segment [i, j) of two slot vectors indexed by container id."""
    n = len(a)
    i, j = sorted(rng.sample(range(n + 1), 2))
    return (list(a[:i]) + list(b[i:j]) + list(a[j:]),
            list(b[:i]) + list(a[i:j]) + list(b[j:]))


def repair(inst: Instance, genes: Sequence[Slot], rng: random.Random,
           rules: Rules = DEFAULT_RULES) -> StowagePlan:
    """Keep every gene that fits; reinsert the conflicting containers at random feasible slots."""
    n = len(inst.containers)
    for _ in range(MAX_RESTARTS + 1):
        order = list(range(n))
        rng.shuffle(order)
        plan = realize(inst, order, genes, rng, rules)
        if plan is not None:
            return plan
    return create_solution(inst, rng, rules)


def _mutate(plan: StowagePlan, inst: Instance, rng: random.Random, groups) -> StowagePlan:
    pair = random_same_type_pair(inst, rng, groups)
    return plan if pair is None else plan.swapped(*pair)


def ga_solve(inst: Instance, params: GaParams, rng: random.Random, rules: Rules = DEFAULT_RULES,
             deadline: Optional[float] = None,
             population: Optional[list[Individual]] = None) -> SolveResult:
    start = time.perf_counter()
    if population is None:
        population = []
        for _ in range(params.population_size):
            plan = create_solution(inst, rng, rules)
            population.append((plan, evaluate(plan, inst)))
    groups = swap_candidates(inst)
    best = min(population, key=lambda ind: ind[1].total)
    f_initial = best[1].total
    stall = 0
    generation = 0
    while (best[1].total > 0 and stall < params.generations_stall
           and generation < params.max_generations
           and (deadline is None or time.perf_counter() < deadline)):
        cumulative = list(itertools.accumulate(roulette_weights([f.total for _, f in population])))
        offspring: list[Individual] = [best]
        while len(offspring) < params.population_size:
            pa = population[roulette_pick(cumulative, rng)][0]
            pb = population[roulette_pick(cumulative, rng)][0]
            if rng.random() < params.crossover_rate:
                ga, gb = two_point_crossover(pa.slots, pb.slots, rng)
                children = [repair(inst, ga, rng, rules), repair(inst, gb, rng, rules)]
            else:
                children = [pa, pb]
            for child in children:
                if len(offspring) == params.population_size:
                    break
                if rng.random() < params.mutation_rate:
                    child = _mutate(child, inst, rng, groups)
                offspring.append((child, evaluate(child, inst)))
        population = offspring
        generation += 1
        champion = min(population, key=lambda ind: ind[1].total)
        if champion[1].total < best[1].total:
            best = champion
            stall = 0
        else:
            stall += 1
    return SolveResult(best[0], best[1], f_initial, best[1].total, generation,
                       time.perf_counter() - start)


def lifo_plan(inst: Instance, order: Sequence[int], rules: Rules = DEFAULT_RULES) -> Optional[StowagePlan]:
    """Stack containers in arrival ``order``, each in the first feasible slot of the sweep."""
    yard = inst.yard
    partial = PartialYard(yard, rules)
    slots: list = [None] * len(inst.containers)
    n_stacks = yard.n_stacks
    for cid in order:
        t = int(inst.containers[cid].ctype)
        stack = next((s for s in range(n_stacks) if partial.top_ok(t, s)), None)
        if stack is None:
            return None
        slots[cid] = yard.slot(partial.place_on(cid, t, stack))
    return StowagePlan(tuple(slots))


def lifo_solve(inst: Instance, rng: random.Random, rules: Rules = DEFAULT_RULES) -> SolveResult:
    """Departure-blind stacking in a random arrival order; no search."""
    start = time.perf_counter()
    for _ in range(MAX_RESTARTS + 1):
        order = list(range(len(inst.containers)))
        rng.shuffle(order)
        plan = lifo_plan(inst, order, rules)
        if plan is not None:
            fit = evaluate(plan, inst)
            return SolveResult(plan, fit, fit.total, fit.total, 0, time.perf_counter() - start)
    raise ConstructionError(f"LIFO stacking dead-ended in {MAX_RESTARTS + 1} arrival orders")
