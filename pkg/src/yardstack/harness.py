"""Seeded experiment runs and table emission."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional, Sequence, TextIO, Union

from .baselines import GaParams, ga_solve, lifo_solve
from .builder import make_rng
from .feasibility import DEFAULT_RULES, Rules, check_all
from .harmony import HsParams, SolveResult, solve
from .instances import generate, load_instance, preset, preset_names
from .model import Instance, YardError

log = logging.getLogger(__name__)

SOLVERS = ("HS", "GA", "LIFO")
CSV_COLUMNS = ("instance", "solver", "seed", "f_initial", "f_final", "elapsed_ms", "params_digest")


@dataclass(frozen=True)
class RunConfig:
    hs: HsParams = field(default_factory=HsParams)
    ga: GaParams = field(default_factory=GaParams)
    rules: Rules = DEFAULT_RULES
    # Wall-clock columns make output differ between runs, so they are opt-in.
    timing: bool = False


@dataclass(frozen=True)
class ExperimentRecord:
    instance_name: str
    solver: str
    seed: int
    f_initial: int
    f_final: int
    elapsed_ms: int
    params_digest: str


@dataclass(frozen=True)
class RunFailure:
    instance_name: str
    solver: str
    seed: int
    message: str


def params_digest(solver: str, cfg: RunConfig) -> str:
    doc = {"solver": solver, "rules": asdict(cfg.rules)}
    if solver == "HS":
        doc["params"] = asdict(cfg.hs)
    elif solver == "GA":
        doc["params"] = asdict(cfg.ga)
    blob = json.dumps(doc, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def source_name(source: str) -> str:
    return source if source in preset_names() or source.startswith("table4-") else Path(source).stem


def instance_for(source: str, seed: int) -> Instance:
    """Preset names get seed-dependent departure dates; files are used as-is."""
    if source in preset_names() or source.startswith("table4-"):
        return generate(preset(source), make_rng(f"instance:{source}:{seed}"))
    return load_instance(source)


def run_solver(inst: Instance, solver: str, cfg: RunConfig, seed: int) -> SolveResult:
    rng = make_rng(f"{solver}:{seed}")
    if solver == "HS":
        return solve(inst, cfg.hs, rng, rules=cfg.rules)
    if solver == "GA":
        return ga_solve(inst, cfg.ga, rng, rules=cfg.rules)
    if solver == "LIFO":
        return lifo_solve(inst, rng, rules=cfg.rules)
    raise ValueError(f"unknown solver {solver!r}; choose from {', '.join(SOLVERS)}")


def run_one(source: str, solver: str, cfg: RunConfig, seed: int) -> Union[ExperimentRecord, RunFailure]:
    name = source_name(source)
    try:
        inst = instance_for(source, seed)
        result = run_solver(inst, solver, cfg, seed)
        violations = check_all(result.best_plan, inst, cfg.rules)
        if violations:
            return RunFailure(name, solver, seed, f"infeasible plan: {violations[0].detail}")
    except YardError as e:
        return RunFailure(name, solver, seed, str(e))
    elapsed_ms = round(result.elapsed * 1000) if cfg.timing else 0
    return ExperimentRecord(name, solver, seed, result.f_initial, result.f_final, elapsed_ms,
                            params_digest(solver, cfg))


def _run_task(task):
    return run_one(*task)


def run_experiment(source: str, solver: str, cfg: RunConfig, seeds: Sequence[int],
                   jobs: int = 1) -> tuple[list[ExperimentRecord], list[RunFailure]]:
    return run_tasks([(source, solver, cfg, s) for s in seeds], jobs)


def run_tasks(tasks: Sequence[tuple], jobs: int = 1) -> tuple[list[ExperimentRecord], list[RunFailure]]:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_task, tasks))
    else:
        outcomes = [_run_task(t) for t in tasks]
    records = [o for o in outcomes if isinstance(o, ExperimentRecord)]
    failures = [o for o in outcomes if isinstance(o, RunFailure)]
    for f in failures:
        log.error("%s/%s seed %d failed: %s", f.instance_name, f.solver, f.seed, f.message)
    return sort_records(records), failures


def sort_records(records: Iterable[ExperimentRecord]) -> list[ExperimentRecord]:
    return sorted(records, key=lambda r: (r.instance_name, SOLVERS.index(r.solver), r.params_digest, r.seed))


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def _stats(values: Sequence[int]) -> tuple[float, float]:
    mean = statistics.fmean(values)
    sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, sd


def groups(records: Sequence[ExperimentRecord]) -> dict[tuple[str, str, str], list[ExperimentRecord]]:
    out: dict[tuple[str, str, str], list[ExperimentRecord]] = {}
    for r in sort_records(records):
        out.setdefault((r.instance_name, r.solver, r.params_digest), []).append(r)
    return out


def table_rows(records: Sequence[ExperimentRecord]) -> list[list[str]]:
    """Data rows grouped by (instance, solver, params), each group followed by mean and stddev rows."""
    rows = []
    for (name, solver, digest), group in groups(records).items():
        for r in group:
            rows.append([name, solver, str(r.seed), str(r.f_initial), str(r.f_final),
                         str(r.elapsed_ms), digest])
        stats = [_stats([getattr(r, k) for r in group]) for k in ("f_initial", "f_final", "elapsed_ms")]
        for label, pick in (("mean", 0), ("stddev", 1)):
            rows.append([name, solver, label] + [_fmt(s[pick]) for s in stats] + [digest])
    return rows


def aligned(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max([len(h)] + [len(r[k]) for r in rows]) for k, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def render(records: Sequence[ExperimentRecord], fmt: str = "csv") -> str:
    rows = table_rows(records)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        writer.writerows(rows)
        return buf.getvalue()
    if fmt == "text":
        return aligned(CSV_COLUMNS, rows)
    raise ValueError(f"unknown format {fmt!r}")


def write_output(text: str, path: Optional[str] = None, stream: Optional[TextIO] = None) -> None:
    if path is None or path == "-":
        (stream or sys.stdout).write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def emit_table(records: Sequence[ExperimentRecord], fmt: str = "csv", path: Optional[str] = None) -> None:
    write_output(render(records, fmt), path)


# Experiment protocols. Each returns the records, the failures and a table-shaped summary.

TABLE2_HMS = (10, 20, 40, 60, 80, 100)


def table1(seeds: Sequence[int], cfg: RunConfig = RunConfig(), jobs: int = 1):
    cfg = replace(cfg, hs=replace(cfg.hs, hms=50, n_iter_stall=20))
    tasks = [(f"table1-row{k}", "HS", cfg, s) for k in range(1, 6) for s in seeds]
    records, failures = run_tasks(tasks, jobs)
    header = ("row", "F_i", "F_f", "T_exe_ms", "zero_runs")
    rows = []
    for (name, _, _), group in groups(records).items():
        rows.append([name, _fmt(statistics.fmean(r.f_initial for r in group)),
                     _fmt(statistics.fmean(r.f_final for r in group)),
                     _fmt(statistics.fmean(r.elapsed_ms for r in group)),
                     f"{sum(r.f_final == 0 for r in group)}/{len(group)}"])
    return records, failures, aligned(header, rows)


def table2(seeds: Sequence[int], cfg: RunConfig = RunConfig(), hms_values: Sequence[int] = TABLE2_HMS,
           jobs: int = 1):
    tasks = []
    configs = {}
    for hms in hms_values:
        c = replace(cfg, hs=replace(cfg.hs, hms=hms, n_iter_stall=50))
        configs[params_digest("HS", c)] = hms
        tasks += [("table2", "HS", c, s) for s in seeds]
    records, failures = run_tasks(tasks, jobs)
    header = ("HMS", "F_i", "F_f", "T_exe_ms")
    by_hms = {configs[d]: g for (_, _, d), g in groups(records).items()}
    rows = [[str(h), _fmt(statistics.fmean(r.f_initial for r in g)),
             _fmt(statistics.fmean(r.f_final for r in g)),
             _fmt(statistics.fmean(r.elapsed_ms for r in g))]
            for h, g in sorted(by_hms.items())]
    return records, failures, aligned(header, rows)


def compare(sources: Sequence[str], seeds: Sequence[int], cfg: RunConfig = RunConfig(), jobs: int = 1):
    """HS, GA and LIFO on the same instances and seeds, one row per instance with mean fitness and time per solver."""
    tasks = [(src, solver, cfg, s) for src in sources for solver in ("LIFO", "GA", "HS") for s in seeds]
    records, failures = run_tasks(tasks, jobs)
    summary: dict[str, dict[str, list[ExperimentRecord]]] = {}
    for (name, solver, _), group in groups(records).items():
        summary.setdefault(name, {})[solver] = group
    header = ("instance", "LIFO_F", "LIFO_T_ms", "GA_F", "GA_T_ms", "HS_F", "HS_T_ms")
    rows = []
    for name in [source_name(s) for s in sources]:
        row = [name]
        for solver in ("LIFO", "GA", "HS"):
            g = summary.get(name, {}).get(solver)
            row += ([_fmt(statistics.fmean(r.f_final for r in g)), _fmt(statistics.fmean(r.elapsed_ms for r in g))]
                    if g else ["-", "-"])
        rows.append(row)
    return records, failures, aligned(header, rows)


def table4(seeds: Sequence[int], cfg: RunConfig = RunConfig(), jobs: int = 1):
    cfg = replace(cfg, hs=replace(cfg.hs, hms=30, n_iter_stall=20),
                  ga=replace(cfg.ga, population_size=30, generations_stall=20))
    return compare([f"table3-instance{k}" for k in range(1, 6)], seeds, cfg, jobs)
