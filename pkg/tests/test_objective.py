import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import T, make_instance, make_plan
from yardstack.builder import random_same_type_pair
from yardstack.instances import preset
from yardstack.model import NotFoundError, StowagePlan, YardConfig
from yardstack.objective import blocking_count, evaluate, evaluate_swap


def brute_total(plan, inst):
    """Pairwise oracle: count (below, above) pairs in one stack where the upper one leaves later."""
    total = 0
    cs = inst.containers
    for i, si in enumerate(plan.slots):
        for j, sj in enumerate(plan.slots):
            same_stack = (si.block, si.x, si.y) == (sj.block, sj.x, sj.y)
            if same_stack and sj.z > si.z and cs[j].departure > cs[i].departure:
                total += 1
    return total


def random_plan(rng, yard, n):
    """Any injective placement, stacked or not: evaluation does not need feasibility."""
    inst = make_instance(yard, [(rng.choice([T.DRY, T.EMPTY, T.TANK]), rng.randint(1, 6)) for _ in range(n)])
    return inst, StowagePlan(tuple(rng.sample(list(yard.slots()), n)))


def test_topmost_is_zero(yard2):
    inst = make_instance(yard2, [(T.DRY, 1), (T.DRY, 5)])
    plan = make_plan((0, 0, 0, 0), (0, 0, 0, 1))
    assert blocking_count(plan, inst, 1) == 0
    assert blocking_count(plan, inst, 0) == 1


def test_ties_do_not_count(yard2):
    inst = make_instance(yard2, [(T.DRY, 3), (T.DRY, 3), (T.DRY, 1)])
    plan = make_plan((0, 0, 0, 0), (0, 0, 0, 1), (0, 0, 0, 2))
    fit = evaluate(plan, inst)
    assert fit.per_container == (0, 0, 0)
    assert fit.total == brute_total(plan, inst) == 0


def test_unknown_id(yard2):
    inst = make_instance(yard2, [(T.DRY, 1)])
    with pytest.raises(NotFoundError):
        blocking_count(make_plan((0, 0, 0, 0)), inst, 3)


def test_single_container_zero(yard2):
    inst = make_instance(yard2, [(T.DRY, 9)])
    assert evaluate(make_plan((0, 1, 1, 0)), inst).total == 0


def test_non_increasing_stacks_score_zero():
    yard = YardConfig(1, 0, 2, 1, 3)
    inst = make_instance(yard, [(T.DRY, 9), (T.DRY, 7), (T.DRY, 7), (T.DRY, 4), (T.DRY, 2)])
    plan = make_plan((0, 0, 0, 0), (0, 0, 0, 1), (0, 0, 0, 2), (0, 1, 0, 0), (0, 1, 0, 1))
    assert evaluate(plan, inst).total == 0


def test_fully_inverted_stack():
    yard = YardConfig(1, 0, 1, 1, 3)
    inst = make_instance(yard, [(T.DRY, 1), (T.DRY, 2), (T.DRY, 3)])
    plan = make_plan((0, 0, 0, 0), (0, 0, 0, 1), (0, 0, 0, 2))
    fit = evaluate(plan, inst)
    assert fit.per_container == (2, 1, 0)
    assert fit.total == 3


def test_oracle_equivalence_on_random_plans():
    rng = random.Random(11)
    for _ in range(500):
        yard = YardConfig(rng.randint(1, 3), 0, rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3))
        inst, plan = random_plan(rng, yard, rng.randint(0, yard.capacity))
        fit = evaluate(plan, inst)
        assert fit.total == brute_total(plan, inst) == sum(fit.per_container)
        assert all(0 <= m <= yard.n3 - 1 for m in fit.per_container)


def test_incremental_swap_matches_full():
    rng = random.Random(12)
    for _ in range(500):
        yard = YardConfig(rng.randint(1, 3), 0, 3, 3, 3)
        inst, plan = random_plan(rng, yard, rng.randint(2, min(40, yard.capacity)))
        fit = evaluate(plan, inst)
        a, b = rng.sample(range(len(inst.containers)), 2)
        new_plan, new_fit = evaluate_swap(plan, inst, fit, a, b)
        assert new_plan == plan.swapped(a, b)
        assert new_fit == evaluate(new_plan, inst)


def test_swap_only_touches_two_stacks():
    rng = random.Random(13)
    yard = YardConfig(2, 0, 3, 3, 3)
    for _ in range(200):
        inst, plan = random_plan(rng, yard, 30)
        a, b = random_same_type_pair(inst, rng) or (0, 1)
        before = evaluate(plan, inst).per_container
        after = evaluate(plan.swapped(a, b), inst).per_container
        touched = {yard.index(plan.slots[c]) // yard.n3 for c in (a, b)}
        for cid, slot in enumerate(plan.slots):
            if yard.index(slot) // yard.n3 not in touched:
                assert before[cid] == after[cid]


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_relabel_invariance(rnd):
    yard = YardConfig(1, 0, 2, 2, 3)
    inst, plan = random_plan(rnd, yard, rnd.randint(0, 12))
    perm = list(range(len(inst.containers)))
    rnd.shuffle(perm)
    relabelled = make_instance(yard, [(inst.containers[p].ctype, inst.containers[p].departure) for p in perm])
    moved = StowagePlan(tuple(plan.slots[p] for p in perm))
    assert evaluate(moved, relabelled).total == evaluate(plan, inst).total


def test_table1_row5_capacity_sanity():
    spec = preset("table1-row5")
    assert spec.n_containers == 61
    assert spec.yard.capacity == 8 * 27 == 216
