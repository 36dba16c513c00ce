import itertools
import random
from collections import Counter
from fractions import Fraction

import pytest
from scipy.stats import chisquare

from conftest import T, make_instance, random_instance
from yardstack.builder import create_solution
from yardstack.feasibility import check_all, placement_ok
from yardstack.harmony import (
    HarmonyMemory,
    HsParams,
    improvise,
    init_memory,
    pitch_adjust,
    solve,
    update_memory,
)
from yardstack.instances import DeparturePolicy, generate, preset
from yardstack.model import OccupancyGrid, StowagePlan, ValidationError, YardConfig
from yardstack.objective import Fitness, evaluate


def fit(total):
    return Fitness(total, ())


def memory_of(totals):
    return HarmonyMemory([(StowagePlan(()), fit(t)) for t in totals])


@pytest.mark.parametrize("kwargs", [dict(hms=0), dict(hmcr=1.5), dict(par=-0.1), dict(n_iter_stall=0),
                                    dict(bw_swaps=0), dict(max_improvisations=0)])
def test_bad_params(kwargs):
    with pytest.raises(ValidationError):
        HsParams(**kwargs)


def test_worst_index_prefers_lowest_on_ties():
    assert memory_of([3, 5, 5, 1]).worst_index == 1


def test_memory_size_one():
    inst = generate(preset("table1-row1"), random.Random(0))
    mem = init_memory(inst, HsParams(hms=1), random.Random(0))
    assert len(mem) == 1
    assert check_all(mem.entries[0][0], inst) == []


def test_init_memory_hms50_feasible_and_deterministic():
    inst = generate(preset("table1-row1"), random.Random(0))
    a = init_memory(inst, HsParams(hms=50), random.Random("m"))
    b = init_memory(inst, HsParams(hms=50), random.Random("m"))
    assert a.entries == b.entries
    assert all(check_all(p, inst) == [] for p, _ in a.entries)


def test_update_memory_exhaustive_size3():
    for triple in itertools.product(range(4), repeat=3):
        for cand in range(5):
            mem = memory_of(triple)
            accepted = update_memory(mem, (StowagePlan(()), fit(cand)))
            totals = [f.total for _, f in mem.entries]
            if cand < max(triple):
                k = triple.index(max(triple))
                expected = list(triple)
                expected[k] = cand
                assert accepted and totals == expected
            else:
                assert not accepted and totals == list(triple)
            assert mem.worst.total == max(totals)
            assert totals.index(max(totals)) == mem.worst_index


def test_degenerate_memory_reproduces_plan():
    inst = generate(preset("table3-instance5"), random.Random(3))
    rng = random.Random(3)
    plan = create_solution(inst, rng)
    f = evaluate(plan, inst)
    mem = HarmonyMemory([(plan, f)] * 5)
    params = HsParams(hms=5, hmcr=1.0, par=0.0)
    for _ in range(20):
        assert improvise(mem, inst, params, rng) == plan


def test_degenerate_memory_never_degrades():
    inst = generate(preset("table1-row3"), random.Random(5))
    rng = random.Random(5)
    plan = create_solution(inst, rng)
    f = evaluate(plan, inst)
    params = HsParams(hms=4, hmcr=1.0, par=0.0, n_iter_stall=3)
    result = solve(inst, params, rng, memory=HarmonyMemory([(plan, f)] * 4))
    assert result.f_final == result.f_initial == f.total


def fallback_distribution(inst):
    """Exact output law of random-order, uniformly-random-feasible-slot placement."""
    yard = inst.yard
    n = len(inst.containers)
    law = Counter()

    def walk(grid, order, slots, p):
        if not order:
            law[tuple(slots)] += p
            return
        cid, rest = order[0], order[1:]
        options = [s for s in yard.slots()
                   if grid[s] is None and placement_ok(grid, inst, yard, inst.containers[cid], s)]
        for s in options:
            g = OccupancyGrid(yard, list(grid.cells))
            g.cells[yard.index(s)] = cid
            nxt = list(slots)
            nxt[cid] = s
            walk(g, rest, nxt, p / len(options))

    orders = list(itertools.permutations(range(n)))
    for order in orders:
        walk(OccupancyGrid(yard), list(order), [None] * n, Fraction(1, len(orders)))
    return law


def test_hmcr_zero_matches_fallback_law():
    yard = YardConfig(1, 0, 2, 1, 2)
    inst = make_instance(yard, [(T.DRY, 1), (T.OPEN_TOP, 2)])
    law = fallback_distribution(inst)
    assert sum(law.values()) == 1
    rng = random.Random(21)
    mem = HarmonyMemory([(create_solution(inst, rng), fit(0))])
    params = HsParams(hms=1, hmcr=0.0, par=0.0)
    draws = 6000
    seen = Counter(improvise(mem, inst, params, rng).slots for _ in range(draws))
    assert set(seen) <= set(law)
    keys = sorted(law)
    observed = [seen[k] for k in keys]
    expected = [float(law[k]) * draws for k in keys]
    assert chisquare(observed, expected).pvalue > 0.001


def test_pitch_adjustment_exchanges_same_type_pair():
    yard = YardConfig(1, 0, 2, 1, 1)
    inst = make_instance(yard, [(T.DRY, 1), (T.DRY, 2)])
    rng = random.Random(0)
    plan = create_solution(inst, rng)
    mem = HarmonyMemory([(plan, evaluate(plan, inst))])
    always = {improvise(mem, inst, HsParams(hms=1, hmcr=1.0, par=1.0), random.Random(s)) for s in range(200)}
    assert always == {plan.swapped(0, 1)}
    mixed = Counter(improvise(mem, inst, HsParams(hms=1, hmcr=1.0, par=0.5), random.Random(s))
                    for s in range(1000))
    assert set(mixed) == {plan, plan.swapped(0, 1)}


def test_pitch_adjust_without_repeated_types_is_identity(yard2):
    inst = make_instance(yard2, [(T.DRY, 1), (T.TANK, 2)])
    plan = create_solution(inst, random.Random(0))
    assert pitch_adjust(plan, inst, random.Random(0), swaps=3) == plan


def test_equal_departures_stop_immediately():
    spec = preset("table1-row5", DeparturePolicy("equal"))
    inst = generate(spec, random.Random(0))
    result = solve(inst, HsParams(hms=5), random.Random(0))
    assert result.f_initial == result.f_final == 0
    assert result.improvisations == 0


def test_solve_deterministic_and_monotone():
    inst = generate(preset("table3-instance5"), random.Random(9))
    params = HsParams(hms=8, n_iter_stall=3)
    a = solve(inst, params, random.Random("hs:1"))
    b = solve(inst, params, random.Random("hs:1"))
    assert (a.best_plan, a.f_initial, a.f_final, a.improvisations) == \
           (b.best_plan, b.f_initial, b.f_final, b.improvisations)
    assert a.f_final <= a.f_initial
    assert evaluate(a.best_plan, inst).total == a.f_final
    assert check_all(a.best_plan, inst) == []


def test_improvisation_cap_and_deadline():
    inst = generate(preset("table3-instance5"), random.Random(9))
    capped = solve(inst, HsParams(hms=5, max_improvisations=7), random.Random(0))
    assert capped.improvisations <= 7
    expired = solve(inst, HsParams(hms=5), random.Random(0), deadline=0.0)
    assert expired.improvisations == 0


def test_table1_row1_reaches_zero():
    inst = generate(preset("table1-row1"), random.Random(0))
    result = solve(inst, HsParams(hms=50, n_iter_stall=20), random.Random(0))
    assert result.f_final == 0


def test_memory_stays_feasible_on_random_instances():
    rng = random.Random(17)
    for _ in range(30):
        inst = random_instance(rng, max_containers=40)
        mem = init_memory(inst, HsParams(hms=4), rng)
        solve(inst, HsParams(hms=4, n_iter_stall=2), rng, memory=mem)
        assert all(check_all(p, inst) == [] for p, _ in mem.entries)
