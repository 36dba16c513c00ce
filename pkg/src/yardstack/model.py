"""Domain types for the container storage space allocation problem.

Coordinates are 0-based. ``z == 0`` is the ground floor. Blocks
``[0, n_regular)`` are regular, ``[n_regular, n_blocks)`` are reefer-powered.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, NamedTuple, Optional, Sequence


class YardError(Exception):
    """Base class for all errors raised by this package."""


class IntegrityError(YardError):
    """A plan is not a valid total, injective, in-bounds assignment."""


class NotFoundError(YardError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "not found"


class ValidationError(YardError, ValueError):
    """An instance, instance spec or file violates its invariants."""


class ConstructionError(YardError):
    """A randomized construction could not place every container."""

    def __init__(self, message: str, unplaced: Sequence[int] = ()):
        super().__init__(message)
        self.unplaced = tuple(unplaced)


class ContainerType(IntEnum):
    DRY = 1
    EMPTY = 2
    OPEN_TOP = 3
    OPEN_SIDE = 4
    TANK = 5
    REEFER = 6


ALL_TYPES = tuple(ContainerType)


@dataclass(frozen=True)
class Container:
    id: int
    ctype: ContainerType
    departure: int

    def __post_init__(self):
        if self.id < 0:
            raise ValidationError(f"container id must be >= 0, got {self.id}")
        if self.departure < 0:
            raise ValidationError(f"container {self.id}: departure must be >= 0")
        try:
            object.__setattr__(self, "ctype", ContainerType(self.ctype))
        except ValueError:
            raise ValidationError(f"container {self.id}: unknown type code {self.ctype!r}") from None


class Slot(NamedTuple):
    block: int
    x: int
    y: int
    z: int


@dataclass(frozen=True)
class YardConfig:
    n_regular: int
    n_reefer: int
    n1: int
    n2: int
    n3: int

    def __post_init__(self):
        if self.n_regular < 0 or self.n_reefer < 0:
            raise ValidationError("block counts must be >= 0")
        if self.n_regular + self.n_reefer < 1:
            raise ValidationError("yard needs at least one block")
        if min(self.n1, self.n2, self.n3) < 1:
            raise ValidationError("grid bounds n1, n2, n3 must be >= 1")

    @property
    def n_blocks(self) -> int:
        return self.n_regular + self.n_reefer

    @property
    def block_size(self) -> int:
        return self.n1 * self.n2 * self.n3

    @property
    def capacity(self) -> int:
        return self.n_blocks * self.block_size

    @property
    def reefer_capacity(self) -> int:
        return self.n_reefer * self.block_size

    @property
    def n_stacks(self) -> int:
        return self.n_blocks * self.n1 * self.n2

    def is_reefer_block(self, block: int) -> bool:
        return block >= self.n_regular

    def in_bounds(self, slot: Slot) -> bool:
        b, x, y, z = slot
        return (0 <= b < self.n_blocks and 0 <= x < self.n1
                and 0 <= y < self.n2 and 0 <= z < self.n3)

    # Flat layout: ((b*n1 + x)*n2 + y)*n3 + z, so each stack is a run of n3 cells.
    def index(self, slot: Slot) -> int:
        b, x, y, z = slot
        return ((b * self.n1 + x) * self.n2 + y) * self.n3 + z

    def slot(self, index: int) -> Slot:
        rest, z = divmod(index, self.n3)
        rest, y = divmod(rest, self.n2)
        b, x = divmod(rest, self.n1)
        return Slot(b, x, y, z)

    def slots(self) -> Iterator[Slot]:
        """All slots in (block, x, y, z) sweep order."""
        for i in range(self.capacity):
            yield self.slot(i)


@dataclass(frozen=True)
class Instance:
    yard: YardConfig
    containers: tuple[Container, ...]

    def __post_init__(self):
        object.__setattr__(self, "containers", tuple(self.containers))
        for pos, c in enumerate(self.containers):
            if c.id != pos:
                raise ValidationError(
                    f"container ids must be unique and dense in [0, {len(self.containers)}); "
                    f"position {pos} holds id {c.id}")
        if len(self.containers) > self.yard.capacity:
            raise ValidationError(
                f"{len(self.containers)} containers exceed yard capacity {self.yard.capacity}")
        n_reefer = self.count(ContainerType.REEFER)
        if n_reefer > self.yard.reefer_capacity:
            raise ValidationError(
                f"{n_reefer} reefers exceed reefer capacity {self.yard.reefer_capacity}")

    def __len__(self) -> int:
        return len(self.containers)

    def count(self, ctype: ContainerType) -> int:
        return sum(1 for c in self.containers if c.ctype == ctype)

    def counts(self) -> dict[ContainerType, int]:
        return {t: self.count(t) for t in ALL_TYPES}

    def container(self, cid: int) -> Container:
        if not 0 <= cid < len(self.containers):
            raise NotFoundError(f"unknown container id {cid}")
        return self.containers[cid]


@dataclass(frozen=True)
class StowagePlan:
    """Assignment of every container to a slot; ``slots[i]`` is container i's slot."""

    slots: tuple[Slot, ...]

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(Slot(*s) for s in self.slots))

    @property
    def assignment(self) -> dict[int, Slot]:
        return dict(enumerate(self.slots))

    def __len__(self) -> int:
        return len(self.slots)

    def slot_of(self, cid: int) -> Slot:
        if not 0 <= cid < len(self.slots):
            raise NotFoundError(f"container {cid} is not assigned in this plan")
        return self.slots[cid]

    def swapped(self, a: int, b: int) -> StowagePlan:
        slots = list(self.slots)
        slots[a], slots[b] = slots[b], slots[a]
        return StowagePlan(tuple(slots))


class OccupancyGrid:
    """Dense per-slot lookup: container id, or None for an empty cell."""

    def __init__(self, yard: YardConfig, cells: Optional[list[Optional[int]]] = None):
        self.yard = yard
        self.cells = cells if cells is not None else [None] * yard.capacity

    def __getitem__(self, slot: Slot) -> Optional[int]:
        return self.cells[self.yard.index(slot)]

    def occupied(self) -> Iterator[tuple[Slot, int]]:
        for i, cid in enumerate(self.cells):
            if cid is not None:
                yield self.yard.slot(i), cid

    def n_occupied(self) -> int:
        return sum(1 for c in self.cells if c is not None)


def occupancy(plan: StowagePlan, inst: Instance) -> OccupancyGrid:
    if len(plan.slots) != len(inst.containers):
        raise IntegrityError(
            f"plan assigns {len(plan.slots)} containers, instance has {len(inst.containers)}")
    yard = inst.yard
    grid = OccupancyGrid(yard)
    cells = grid.cells
    for cid, slot in enumerate(plan.slots):
        if not yard.in_bounds(slot):
            raise IntegrityError(f"container {cid} assigned out-of-bounds slot {tuple(slot)}")
        i = yard.index(slot)
        if cells[i] is not None:
            raise IntegrityError(
                f"containers {cells[i]} and {cid} share slot {tuple(slot)}")
        cells[i] = cid
    return grid


def stack_above(plan: StowagePlan, inst: Instance, cid: int) -> list[int]:
    """Ids strictly above ``cid`` in its (block, x, y) stack, by increasing z."""
    inst.container(cid)
    b, x, y, z = plan.slot_of(cid)
    above = [(s.z, j) for j, s in enumerate(plan.slots)
             if s.z > z and s.block == b and s.x == x and s.y == y]
    return [j for _, j in sorted(above)]
