"""Command-line entry point: ``yardstack <command> ...``.

Exit codes: 0 ok, 1 usage, 2 validation or I/O, 3 solver failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Optional, Sequence

from . import harness
from .baselines import GaParams
from .builder import make_rng
from .feasibility import Rules, check_all
from .harmony import HsParams
from .instances import (
    DeparturePolicy,
    InstanceSpec,
    canonical_json,
    generate,
    instance_to_dict,
    load_instance,
    load_plan,
    preset,
    preset_names,
    save_instance,
    save_plan,
)
from .model import ConstructionError, ContainerType, YardConfig, YardError
from .objective import evaluate

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_SOLVER = 0, 1, 2, 3
PRESET_CHOICES = preset_names() + [f"table4-instance{k}" for k in range(1, 6)]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_seeds(text: str) -> list[int]:
    """``"0-14"``, ``"1,5,9"`` or a mix such as ``"0-4,10"``."""
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        if sep and lo:
            a, b = int(lo), int(hi)
            if b < a:
                raise argparse.ArgumentTypeError(f"empty seed range {part!r}")
            seeds.extend(range(a, b + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise argparse.ArgumentTypeError("no seeds given")
    return seeds


def _seed_list(text: str) -> list[int]:
    try:
        return parse_seeds(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed list {text!r}") from None


def _default_seed() -> int:
    try:
        return int(os.environ.get("YARDSTACK_SEED", "0"))
    except ValueError:
        return 0


def _add_rules(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("constraint interpretation")
    g.add_argument("--open-side-strict", action="store_true",
                   help="open-side containers need the whole +X row clear, not just the neighbour")
    g.add_argument("--reefer-exclusive", action=argparse.BooleanOptionalAction, default=False,
                   help="reserve powered blocks for reefers (default: off)")
    g.add_argument("--tank-bidirectional", action=argparse.BooleanOptionalAction, default=True,
                   help="a tank above the ground must sit on a tank (default: on)")


def _add_solver_params(p: argparse.ArgumentParser) -> None:
    hs, ga = HsParams(), GaParams()
    g = p.add_argument_group("harmony search")
    g.add_argument("--hms", type=int, default=hs.hms)
    g.add_argument("--hmcr", type=float, default=hs.hmcr)
    g.add_argument("--par", type=float, default=hs.par)
    g.add_argument("--stall", type=int, default=hs.n_iter_stall,
                   help="stop after this many iterations without improvement")
    g.add_argument("--max-improvisations", type=int, default=hs.max_improvisations)
    g.add_argument("--bw-swaps", type=int, default=hs.bw_swaps)
    g = p.add_argument_group("genetic algorithm")
    g.add_argument("--pop", type=int, default=ga.population_size)
    g.add_argument("--ga-stall", type=int, default=ga.generations_stall)
    g.add_argument("--max-generations", type=int, default=ga.max_generations)
    g.add_argument("--crossover-rate", type=float, default=ga.crossover_rate)
    g.add_argument("--mutation-rate", type=float, default=ga.mutation_rate)


def _add_output(p: argparse.ArgumentParser, default_format: str = "csv") -> None:
    p.add_argument("--format", choices=("csv", "text"), default=default_format)
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--timing", action="store_true",
                   help="record wall-clock elapsed_ms (otherwise 0, keeping output reproducible)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for independent runs")


def _add_source(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--instance", help="instance JSON file")
    g.add_argument("--preset", choices=PRESET_CHOICES)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="yardstack", description="Container yard storage allocation solvers.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write an instance JSON file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=PRESET_CHOICES)
    src.add_argument("--counts", help="per-type counts, e.g. '1=10,2=10,6=4'")
    p.add_argument("--yard", default="4,4,3,3,3", help="n_regular,n_reefer,n1,n2,n3 (with --counts)")
    p.add_argument("--departures", choices=("uniform", "equal", "permutation"), default="uniform")
    p.add_argument("--lo", type=int, default=1)
    p.add_argument("--hi", type=int, default=100)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser("solve", help="solve one instance with one solver")
    _add_source(p)
    p.add_argument("--solver", choices=harness.SOLVERS, default="HS")
    p.add_argument("--seeds", type=_seed_list, default=[_default_seed()])
    p.add_argument("--plan-out", help="write the best plan of the first seed as JSON")
    _add_solver_params(p)
    _add_rules(p)
    _add_output(p)

    p = sub.add_parser("check", help="report constraint violations of a plan")
    p.add_argument("--instance", required=True)
    p.add_argument("--plan", required=True)
    _add_rules(p)

    p = sub.add_parser("compare", help="HS vs GA vs LIFO on the same seeds")
    _add_source(p)
    p.add_argument("--seeds", type=_seed_list, default=[_default_seed()])
    p.add_argument("--summary", action="store_true", help="print the Table-4-shaped summary instead of records")
    _add_solver_params(p)
    _add_rules(p)
    _add_output(p)

    for name, n_default, what in (("table1", 10, "container-type influence (HMS 50, stall 20)"),
                                  ("table2", 15, "memory-size influence (stall 50)"),
                                  ("table4", 15, "LIFO / GA / HS comparison (HMS = pop = 30, stall 20)")):
        p = sub.add_parser(name, help=what, description=(
            f"Run the {what} protocol. Its memory size, population and stall values are fixed by the "
            "protocol; the remaining solver and rule flags still apply."))
        p.add_argument("--n-seeds", type=int, default=n_default)
        p.add_argument("--seeds", type=_seed_list, help="explicit seed list (overrides --n-seeds)")
        p.add_argument("--records", action="store_true", help="emit per-run records instead of the summary")
        if name == "table2":
            p.add_argument("--hms-values", type=_seed_list, default=list(harness.TABLE2_HMS))
        _add_solver_params(p)
        _add_rules(p)
        _add_output(p, default_format="text")
    return parser


def _rules(args) -> Rules:
    return Rules(open_side="full_row" if args.open_side_strict else "adjacent",
                 reefer_exclusive=args.reefer_exclusive, tank_bidirectional=args.tank_bidirectional)


def _config(args) -> harness.RunConfig:
    hs = HsParams(hms=args.hms, hmcr=args.hmcr, par=args.par, n_iter_stall=args.stall,
                  max_improvisations=args.max_improvisations, bw_swaps=args.bw_swaps)
    ga = GaParams(population_size=args.pop, generations_stall=args.ga_stall,
                  max_generations=args.max_generations, crossover_rate=args.crossover_rate,
                  mutation_rate=args.mutation_rate)
    return harness.RunConfig(hs=hs, ga=ga, rules=_rules(args), timing=args.timing)


def _parse_counts(text: str) -> dict[ContainerType, int]:
    counts = {}
    for part in text.split(","):
        code, _, n = part.partition("=")
        counts[ContainerType(int(code))] = int(n)
    return counts


def _cmd_generate(args) -> int:
    policy = DeparturePolicy(args.departures, args.lo, args.hi)
    if args.preset:
        spec = preset(args.preset, policy)
    else:
        try:
            yard = YardConfig(*(int(v) for v in args.yard.split(",")))
            counts = _parse_counts(args.counts)
        except (TypeError, ValueError) as e:
            raise YardError(f"bad --yard/--counts: {e}") from None
        spec = InstanceSpec(yard, counts, policy)
    inst = generate(spec, make_rng(args.seed))
    if args.out:
        save_instance(inst, args.out)
    else:
        sys.stdout.write(canonical_json(instance_to_dict(inst)))
    return EXIT_OK


def _finish(records, failures, args, text: Optional[str] = None) -> int:
    harness.write_output(text if text is not None else harness.render(records, args.format), args.out)
    return EXIT_SOLVER if failures else EXIT_OK


def _cmd_solve(args) -> int:
    cfg = _config(args)
    source = args.instance or args.preset
    if args.instance:
        load_instance(args.instance)
    records, failures = harness.run_experiment(source, args.solver, cfg, args.seeds, args.jobs)
    if args.plan_out:
        seed = args.seeds[0]
        inst = harness.instance_for(source, seed)
        result = harness.run_solver(inst, args.solver, cfg, seed)
        save_plan(result.best_plan, args.plan_out)
    return _finish(records, failures, args)


def _cmd_check(args) -> int:
    inst = load_instance(args.instance)
    plan = load_plan(args.plan, inst)
    violations = check_all(plan, inst, _rules(args))
    for v in violations:
        print(f"{v.kind.value}\t{v.subject}\t{v.detail}")
    print(f"violations={len(violations)} rehandles={evaluate(plan, inst).total}")
    return EXIT_OK if not violations else EXIT_INVALID


def _cmd_compare(args) -> int:
    source = args.instance or args.preset
    records, failures, summary = harness.compare([source], args.seeds, _config(args), args.jobs)
    return _finish(records, failures, args, summary if args.summary else None)


def _cmd_table(args) -> int:
    seeds = args.seeds if args.seeds else list(range(_default_seed(), _default_seed() + args.n_seeds))
    cfg = _config(args)
    if args.command == "table1":
        records, failures, summary = harness.table1(seeds, cfg, args.jobs)
    elif args.command == "table2":
        records, failures, summary = harness.table2(seeds, cfg, args.hms_values, args.jobs)
    else:
        records, failures, summary = harness.table4(seeds, cfg, args.jobs)
    return _finish(records, failures, args, None if args.records else summary)


COMMANDS = {"generate": _cmd_generate, "solve": _cmd_solve, "check": _cmd_check,
            "compare": _cmd_compare, "table1": _cmd_table, "table2": _cmd_table, "table4": _cmd_table}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConstructionError as e:
        print(f"yardstack: solver failure: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except (YardError, OSError) as e:
        print(f"yardstack: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
