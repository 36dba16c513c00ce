import random

import pytest

from yardstack.model import Container, ContainerType, Instance, Slot, StowagePlan, YardConfig

T = ContainerType

ACCEPTANCE_LINES = []


def make_instance(yard, containers):
    """``containers``: iterable of (type, departure)."""
    return Instance(yard, tuple(Container(i, T(t), d) for i, (t, d) in enumerate(containers)))


def make_plan(*slots):
    return StowagePlan(tuple(Slot(*s) for s in slots))


def random_instance(rng: random.Random, max_containers=80, max_blocks=(4, 4), fill=0.5):
    """Random yard up to max_blocks of 3x3x3 with counts over all six types, sized to be constructible."""
    # Block sides lean towards 3 so that most yards can hold dozens of containers.
    side = (1, 2, 3, 3, 3)
    yard = YardConfig(rng.randint(1, max_blocks[0]), rng.randint(0, max_blocks[1]),
                      rng.choice(side), rng.choice(side), rng.choice(side))
    top = min(max_containers, int(fill * yard.capacity))
    n = max(rng.randint(0, top), rng.randint(0, top))  # skewed towards fuller yards
    counts = {t: 0 for t in T}
    counts[T.REEFER] = rng.randint(0, min(n, int(fill * yard.reefer_capacity)))
    # Open-top/side containers each cap a stack, so keep them well below the stack count.
    caps = min(n - counts[T.REEFER], yard.n_stacks // 3)
    counts[T.OPEN_TOP] = rng.randint(0, caps)
    counts[T.OPEN_SIDE] = rng.randint(0, caps - counts[T.OPEN_TOP])
    for _ in range(n - sum(counts.values())):
        counts[rng.choice((T.DRY, T.EMPTY, T.TANK))] += 1
    containers = [(t, rng.randint(1, 20)) for t in T for _ in range(counts[t])]
    rng.shuffle(containers)
    return make_instance(yard, containers)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def report():
    def _report(criterion, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        print(ACCEPTANCE_LINES[-1])
        return ok
    return _report


@pytest.fixture
def yard2():
    return YardConfig(n_regular=1, n_reefer=1, n1=2, n2=2, n3=3)
