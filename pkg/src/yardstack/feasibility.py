"""Stacking constraints: whole-plan checks and the incremental placement test.

Every rule depends only on the type of each occupied cell and the block kind,
never on departure dates.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .model import (
    Container,
    ContainerType,
    Instance,
    OccupancyGrid,
    Slot,
    StowagePlan,
    ValidationError,
    YardConfig,
    YardError,
    occupancy,
)

OPEN_TOP = int(ContainerType.OPEN_TOP)
OPEN_SIDE = int(ContainerType.OPEN_SIDE)
TANK = int(ContainerType.TANK)
REEFER = int(ContainerType.REEFER)


class BoundsError(YardError, IndexError):
    pass


@dataclass(frozen=True)
class Rules:
    """Interpretation switches for the ambiguous constraints.

    open_side: "adjacent" keeps only the +X neighbour at the same level clear;
        "full_row" keeps every +X cell of the row clear.
    reefer_exclusive: non-reefer containers may not use powered blocks.
    tank_bidirectional: a tank above the ground must sit on another tank.
    """

    open_side: str = "adjacent"
    reefer_exclusive: bool = False
    tank_bidirectional: bool = True

    def __post_init__(self):
        if self.open_side not in ("adjacent", "full_row"):
            raise ValidationError(f"open_side must be 'adjacent' or 'full_row', got {self.open_side!r}")


DEFAULT_RULES = Rules()


class ViolationKind(str, Enum):
    FLOATING = "Floating"
    ABOVE_OPEN_TOP_OR_SIDE = "AboveOpenTopOrSide"
    OPEN_SIDE_BLOCKED = "OpenSideBlocked"
    REEFER_BLOCK_MISMATCH = "ReeferBlockMismatch"
    NON_TANK_ON_TANK = "NonTankOnTank"
    TANK_NOT_ON_TANK = "TankNotOnTank"


@dataclass(frozen=True)
class ConstraintViolation:
    kind: ViolationKind
    subject: int
    detail: str


def _types(grid: OccupancyGrid, inst: Instance) -> list[int]:
    cs = inst.containers
    return [0 if cid is None else int(cs[cid].ctype) for cid in grid.cells]


def check_support(grid: OccupancyGrid, yard: YardConfig) -> list[ConstraintViolation]:
    out = []
    n3 = yard.n3
    cells = grid.cells
    for i, cid in enumerate(cells):
        if cid is not None and i % n3 and cells[i - 1] is None:
            out.append(ConstraintViolation(
                ViolationKind.FLOATING, cid, f"container {cid} at {tuple(yard.slot(i))} has an empty cell below"))
    return out


def floor_counts(grid: OccupancyGrid) -> list[list[int]]:
    """``counts[b][z]``: number of containers on floor z of block b."""
    yard = grid.yard
    counts = [[0] * yard.n3 for _ in range(yard.n_blocks)]
    for i, cid in enumerate(grid.cells):
        if cid is not None:
            counts[i // yard.block_size][i % yard.n3] += 1
    return counts


def check_top_access(grid: OccupancyGrid, inst: Instance) -> list[ConstraintViolation]:
    yard = inst.yard
    types = _types(grid, inst)
    out = []
    for i, t in enumerate(types):
        if t in (OPEN_TOP, OPEN_SIDE) and (i + 1) % yard.n3 and types[i + 1]:
            cid = grid.cells[i]
            out.append(ConstraintViolation(
                ViolationKind.ABOVE_OPEN_TOP_OR_SIDE, cid,
                f"{ContainerType(t).name.lower()} container {cid} has container {grid.cells[i + 1]} on top"))
    return out


def check_open_side(grid: OccupancyGrid, inst: Instance, yard: YardConfig,
                    rules: Rules = DEFAULT_RULES) -> list[ConstraintViolation]:
    types = _types(grid, inst)
    step = yard.n2 * yard.n3
    reach = 1 if rules.open_side == "adjacent" else yard.n1
    out = []
    for i, t in enumerate(types):
        if t != OPEN_SIDE:
            continue
        x = (i // step) % yard.n1
        for k in range(1, min(reach, yard.n1 - 1 - x) + 1):
            blocker = grid.cells[i + k * step]
            if blocker is not None:
                cid = grid.cells[i]
                out.append(ConstraintViolation(
                    ViolationKind.OPEN_SIDE_BLOCKED, cid,
                    f"open-side container {cid} at {tuple(yard.slot(i))} is blocked by container {blocker}"))
                break
    return out


def check_reefer_block(plan: StowagePlan, inst: Instance, yard: YardConfig,
                       rules: Rules = DEFAULT_RULES) -> list[ConstraintViolation]:
    out = []
    for c, slot in zip(inst.containers, plan.slots):
        powered = yard.is_reefer_block(slot.block)
        if c.ctype == ContainerType.REEFER and not powered:
            out.append(ConstraintViolation(
                ViolationKind.REEFER_BLOCK_MISMATCH, c.id, f"reefer {c.id} in regular block {slot.block}"))
        elif rules.reefer_exclusive and powered and c.ctype != ContainerType.REEFER:
            out.append(ConstraintViolation(
                ViolationKind.REEFER_BLOCK_MISMATCH, c.id,
                f"{c.ctype.name.lower()} container {c.id} in reefer block {slot.block}"))
    return out


def check_tank_stacking(grid: OccupancyGrid, inst: Instance,
                        rules: Rules = DEFAULT_RULES) -> list[ConstraintViolation]:
    n3 = inst.yard.n3
    types = _types(grid, inst)
    cells = grid.cells
    out = []
    for i, t in enumerate(types):
        if not t or i % n3 == 0:
            continue
        below = types[i - 1]
        if below == TANK and t != TANK:
            out.append(ConstraintViolation(
                ViolationKind.NON_TANK_ON_TANK, cells[i], f"container {cells[i]} sits on tank {cells[i - 1]}"))
        elif rules.tank_bidirectional and t == TANK and below and below != TANK:
            out.append(ConstraintViolation(
                ViolationKind.TANK_NOT_ON_TANK, cells[i], f"tank {cells[i]} sits on non-tank {cells[i - 1]}"))
    return out


def check_all(plan: StowagePlan, inst: Instance, rules: Rules = DEFAULT_RULES) -> list[ConstraintViolation]:
    """Every violation of the plan; an empty list means the plan is feasible.

    Raises IntegrityError if the plan is not total, injective and in bounds.
    """
    grid = occupancy(plan, inst)
    yard = inst.yard
    return (check_support(grid, yard)
            + check_top_access(grid, inst)
            + check_open_side(grid, inst, yard, rules)
            + check_reefer_block(plan, inst, yard, rules)
            + check_tank_stacking(grid, inst, rules))


def cell_ok(types: Sequence[int], yard: YardConfig, ctype: int, i: int, rules: Rules) -> bool:
    """Placement test on a flat array of type codes (0 = empty cell)."""
    if types[i]:
        return False
    n3 = yard.n3
    powered = i // yard.block_size >= yard.n_regular
    if ctype == REEFER:
        if not powered:
            return False
    elif powered and rules.reefer_exclusive:
        return False
    if i % n3:
        below = types[i - 1]
        if not below or below == OPEN_TOP or below == OPEN_SIDE:
            return False
        if below == TANK:
            if ctype != TANK:
                return False
        elif ctype == TANK and rules.tank_bidirectional:
            return False
    step = yard.n2 * n3
    x = (i // step) % yard.n1
    if rules.open_side == "adjacent":
        if ctype == OPEN_SIDE and x + 1 < yard.n1 and types[i + step]:
            return False
        if x > 0 and types[i - step] == OPEN_SIDE:
            return False
    else:
        if ctype == OPEN_SIDE:
            for k in range(1, yard.n1 - x):
                if types[i + k * step]:
                    return False
        for k in range(1, x + 1):
            if types[i - k * step] == OPEN_SIDE:
                return False
    return True


def placement_ok(grid: OccupancyGrid, inst: Instance, yard: YardConfig, container: Container,
                 slot: Slot, rules: Rules = DEFAULT_RULES) -> bool:
    """Whether ``container`` may be put at ``slot`` on top of the feasible partial ``grid``."""
    if not yard.in_bounds(slot):
        raise BoundsError(f"slot {tuple(slot)} is outside the yard")
    return cell_ok(_types(grid, inst), yard, int(container.ctype), yard.index(slot), rules)


class PartialYard:
    """Mutable partial stowage used by the constructive algorithms.

    Stacks stay contiguous from the ground, so the only candidate cell of a
    stack is the one at its current height.
    """

    __slots__ = ("yard", "rules", "types", "ids", "heights", "n3")

    def __init__(self, yard: YardConfig, rules: Rules = DEFAULT_RULES):
        self.yard = yard
        self.rules = rules
        self.n3 = yard.n3
        self.types = [0] * yard.capacity
        self.ids: list[Optional[int]] = [None] * yard.capacity
        self.heights = [0] * yard.n_stacks

    def ok(self, ctype: int, i: int) -> bool:
        return cell_ok(self.types, self.yard, ctype, i, self.rules)

    def top_ok(self, ctype: int, stack: int) -> bool:
        h = self.heights[stack]
        return h < self.n3 and cell_ok(self.types, self.yard, ctype, stack * self.n3 + h, self.rules)

    def open_stacks(self, ctype: int) -> list[int]:
        return [s for s in range(len(self.heights)) if self.top_ok(ctype, s)]

    def place(self, cid: int, ctype: int, i: int) -> None:
        self.types[i] = ctype
        self.ids[i] = cid
        self.heights[i // self.n3] += 1

    def place_on(self, cid: int, ctype: int, stack: int) -> int:
        i = stack * self.n3 + self.heights[stack]
        self.place(cid, ctype, i)
        return i
