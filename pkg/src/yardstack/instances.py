"""Instance generation, named presets, and JSON (de)serialization."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Union

from .model import (
    ALL_TYPES,
    Container,
    ContainerType,
    Instance,
    Slot,
    StowagePlan,
    ValidationError,
    YardConfig,
    YardError,
)

PathLike = Union[str, Path]


class ParseError(YardError, ValueError):
    pass


@dataclass(frozen=True)
class DeparturePolicy:
    """``uniform`` draws integers in [lo, hi]; ``equal`` gives every container ``lo``;
    ``permutation`` assigns a random permutation of 1..N."""

    kind: str = "uniform"
    lo: int = 1
    hi: int = 100

    def __post_init__(self):
        if self.kind not in ("uniform", "equal", "permutation"):
            raise ValidationError(f"unknown departure policy {self.kind!r}")
        if self.lo < 0 or self.hi < self.lo:
            raise ValidationError(f"bad departure range [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class InstanceSpec:
    yard: YardConfig
    counts: Mapping[ContainerType, int]
    departures: DeparturePolicy = field(default_factory=DeparturePolicy)

    def __post_init__(self):
        counts = {ContainerType(t): int(n) for t, n in self.counts.items()}
        if any(n < 0 for n in counts.values()):
            raise ValidationError("container counts must be >= 0")
        object.__setattr__(self, "counts", counts)
        total = sum(counts.values())
        if total > self.yard.capacity:
            raise ValidationError(f"{total} containers exceed yard capacity {self.yard.capacity}")
        reefers = counts.get(ContainerType.REEFER, 0)
        if reefers > self.yard.reefer_capacity:
            raise ValidationError(
                f"{reefers} reefers exceed reefer capacity {self.yard.reefer_capacity}")

    @property
    def n_containers(self) -> int:
        return sum(self.counts.values())


def generate(spec: InstanceSpec, rng: random.Random) -> Instance:
    types = [t for t in ALL_TYPES for _ in range(spec.counts.get(t, 0))]
    pol = spec.departures
    if pol.kind == "uniform":
        deps = [rng.randint(pol.lo, pol.hi) for _ in types]
    elif pol.kind == "equal":
        deps = [pol.lo] * len(types)
    else:
        deps = list(range(1, len(types) + 1))
        rng.shuffle(deps)
    return Instance(spec.yard, tuple(Container(i, t, d) for i, (t, d) in enumerate(zip(types, deps))))


D, E, OT, OS, TK, RF = ALL_TYPES

TABLE1_YARD = YardConfig(n_regular=4, n_reefer=4, n1=3, n2=3, n3=3)
TABLE2_YARD = YardConfig(n_regular=3, n_reefer=3, n1=3, n2=3, n3=3)
TABLE4_YARD = YardConfig(n_regular=3, n_reefer=2, n1=3, n2=3, n3=3)

_TABLE1_COUNTS = [
    {D: 10, E: 10},
    {D: 10, E: 10, OT: 8},
    {D: 10, E: 10, OT: 8, OS: 8},
    {D: 10, E: 10, OT: 8, OS: 8, TK: 15},
    {D: 10, E: 10, OT: 8, OS: 8, TK: 15, RF: 10},
]
_TABLE3_COUNTS = [
    {D: 50, OT: 15},
    {D: 25, E: 25, OT: 10},
    {OT: 8, OS: 5, TK: 7, RF: 15},
    {E: 14, OT: 8, OS: 5, TK: 7, RF: 15},
    {D: 25, E: 14, OT: 9, OS: 8, TK: 7, RF: 12},
]

PRESETS: dict[str, tuple[YardConfig, dict[ContainerType, int]]] = {}
for _k, _c in enumerate(_TABLE1_COUNTS, 1):
    PRESETS[f"table1-row{_k}"] = (TABLE1_YARD, _c)
PRESETS["table2"] = (TABLE2_YARD, {D: 20, E: 20, OT: 15, TK: 10, RF: 20})
for _k, _c in enumerate(_TABLE3_COUNTS, 1):
    PRESETS[f"table3-instance{_k}"] = (TABLE4_YARD, _c)

_ALIASES = {f"table4-instance{k}": f"table3-instance{k}" for k in range(1, 6)}


def preset_names() -> list[str]:
    return list(PRESETS)


def preset(name: str, departures: DeparturePolicy = DeparturePolicy()) -> InstanceSpec:
    key = _ALIASES.get(name, name)
    if key not in PRESETS:
        raise ValidationError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    yard, counts = PRESETS[key]
    return InstanceSpec(yard, dict(counts), departures)


def canonical_json(doc: Any) -> str:
    """Sorted keys, two-space indent, trailing newline: equal documents give equal bytes."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _dump(doc: Any, path: PathLike) -> None:
    Path(path).write_text(canonical_json(doc), encoding="utf-8")


def _read(path: PathLike) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"{path}: not UTF-8 ({e})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None


def _field(obj: Any, key: str, where: str) -> int:
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}.{key}: expected an integer, got {value!r}")
    return value


def instance_to_dict(inst: Instance) -> dict:
    y = inst.yard
    return {
        "yard": {"n_regular": y.n_regular, "n_reefer": y.n_reefer, "n1": y.n1, "n2": y.n2, "n3": y.n3},
        "containers": [{"id": c.id, "type": int(c.ctype), "departure": c.departure}
                       for c in inst.containers],
    }


def instance_from_dict(doc: Any, where: str = "instance") -> Instance:
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected a JSON object")
    ydoc = doc.get("yard")
    yard = YardConfig(*(_field(ydoc, k, f"{where}.yard") for k in ("n_regular", "n_reefer", "n1", "n2", "n3")))
    raw = doc.get("containers")
    if not isinstance(raw, list):
        raise ParseError(f"{where}.containers: expected a list")
    containers = []
    seen = set()
    for k, item in enumerate(raw):
        loc = f"{where}.containers[{k}]"
        cid = _field(item, "id", loc)
        if cid in seen:
            raise ValidationError(f"{loc}: duplicate container id {cid}")
        seen.add(cid)
        containers.append(Container(cid, _field(item, "type", loc), _field(item, "departure", loc)))
    containers.sort(key=lambda c: c.id)
    return Instance(yard, tuple(containers))


def save_instance(inst: Instance, path: PathLike) -> None:
    _dump(instance_to_dict(inst), path)


def load_instance(path: PathLike) -> Instance:
    return instance_from_dict(_read(path), str(path))


def plan_to_dict(plan: StowagePlan) -> dict:
    return {"assignments": [{"id": i, "block": s.block, "x": s.x, "y": s.y, "z": s.z}
                            for i, s in enumerate(plan.slots)]}


def plan_from_dict(doc: Any, inst: Instance, where: str = "plan") -> StowagePlan:
    """Check totality, injectivity and bounds against ``inst``; feasibility is not checked."""
    if not isinstance(doc, dict) or not isinstance(doc.get("assignments"), list):
        raise ParseError(f"{where}: expected an object with an 'assignments' list")
    n = len(inst.containers)
    slots: list = [None] * n
    used: dict[Slot, int] = {}
    for k, item in enumerate(doc["assignments"]):
        loc = f"{where}.assignments[{k}]"
        cid = _field(item, "id", loc)
        slot = Slot(*(_field(item, f, loc) for f in ("block", "x", "y", "z")))
        if not 0 <= cid < n:
            raise ValidationError(f"{loc}: unknown container id {cid}")
        if slots[cid] is not None:
            raise ValidationError(f"{loc}: container {cid} assigned twice")
        if not inst.yard.in_bounds(slot):
            raise ValidationError(f"{loc}: slot {tuple(slot)} is out of bounds")
        if slot in used:
            raise ValidationError(f"{loc}: containers {used[slot]} and {cid} share slot {tuple(slot)}")
        used[slot] = cid
        slots[cid] = slot
    missing = [i for i, s in enumerate(slots) if s is None]
    if missing:
        raise ValidationError(f"{where}: containers {missing} are not assigned")
    return StowagePlan(tuple(slots))


def save_plan(plan: StowagePlan, path: PathLike) -> None:
    _dump(plan_to_dict(plan), path)


def load_plan(path: PathLike, inst: Instance) -> StowagePlan:
    return plan_from_dict(_read(path), inst, str(path))
