"""Storage space allocation for container yards.

Typical use::

    import random
    from yardstack import HsParams, generate, preset, solve
    inst = generate(preset("table1-row3"), random.Random(0))
    result = solve(inst, HsParams(hms=50), random.Random(0))
"""

from .baselines import GaParams, ga_solve, lifo_solve
from .builder import create_solution
from .feasibility import ConstraintViolation, Rules, ViolationKind, check_all
from .harmony import HsParams, SolveResult, solve
from .instances import DeparturePolicy, InstanceSpec, generate, load_instance, load_plan, preset, save_instance, save_plan
from .model import (
    ConstructionError,
    Container,
    ContainerType,
    Instance,
    IntegrityError,
    Slot,
    StowagePlan,
    ValidationError,
    YardConfig,
    YardError,
)
from .objective import Fitness, evaluate

__all__ = [
    "ConstraintViolation", "ConstructionError", "Container", "ContainerType", "DeparturePolicy",
    "Fitness", "GaParams", "HsParams", "Instance", "InstanceSpec", "IntegrityError", "Rules", "Slot",
    "SolveResult", "StowagePlan", "ValidationError", "ViolationKind", "YardConfig", "YardError",
    "check_all", "create_solution", "evaluate", "ga_solve", "generate", "lifo_solve", "load_instance",
    "load_plan", "preset", "save_instance", "save_plan", "solve",
]
