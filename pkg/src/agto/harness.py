"""Benchmark campaign orchestration with deterministic seeding and CSV output.

A campaign runs every (algorithm, function, run) cell, records a per-run
convergence trace, and aggregates per-function summaries, a rank table and a
p-value matrix against the reference algorithm. Completed cells are tracked
in an on-disk manifest so an interrupted campaign resumes where it stopped
and still produces byte-identical files.

Cell seeding is stable and documented: with ``key = f"{algorithm}/{function}/
{run}"``, the run seed is ``splitmix64(base_seed XOR fnv1a64(key))`` (both
hashes over 64 bits), so any implementation can reproduce the schedule.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from agto import benchmarks
from agto import stats
from agto.core import (
    ConfigurationError,
    OptimizerConfig,
    SearchSpace,
    evals_per_iteration,
    init_eval_cost,
    run_optimizer,
)

ALGORITHMS = ("agto", "gto")
REFERENCE_ALGORITHM = "agto"

_MASK64 = (1 << 64) - 1
_NOISE_SALT = 0xA5A5A5A55A5A5A5A  # separates the F7 noise stream from the run stream


def _fnv1a64(data: bytes) -> int:
    value = 0xCBF29CE484222325
    for byte in data:
        value ^= byte
        value = (value * 0x100000001B3) & _MASK64
    return value


def _splitmix64(value: int) -> int:
    value = (value + 0x9E3779B97F4A7C15) & _MASK64
    value = ((value ^ (value >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    value = ((value ^ (value >> 27)) * 0x94D049BB133111EB) & _MASK64
    return value ^ (value >> 31)


def cell_seed(base_seed: int, algorithm: str, function_id: str, run: int) -> int:
    """Stable 64-bit seed for one campaign cell (see module docstring)."""
    key = f"{algorithm}/{function_id}/{run}".encode()
    return _splitmix64((base_seed & _MASK64) ^ _fnv1a64(key))


@dataclass(frozen=True)
class ExperimentConfig:
    """Campaign settings; defaults follow the standard protocol
    (30 runs, population 30, 15000 evaluations per run)."""

    output_dir: Path
    functions: tuple = benchmarks.FUNCTION_IDS
    algorithms: tuple = ALGORITHMS
    runs: int = 30
    pop_size: int = 30
    max_evals: int = 15_000
    base_seed: int = 1
    workers: int = 1
    disable_obl: bool = False  # ablation switches applied to the agto variant
    disable_qrg: bool = False

    def __post_init__(self):
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        unknown = [f for f in self.functions if f not in benchmarks.FUNCTION_IDS]
        if unknown:
            raise ConfigurationError(f"unknown function ids: {unknown}")
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad:
            raise ConfigurationError(f"unknown algorithms: {bad}")
        if self.runs < 1:
            raise ConfigurationError("runs must be positive")
        if self.workers < 1:
            raise ConfigurationError("workers must be positive")


def optimizer_config(cfg: ExperimentConfig, algorithm: str, seed: int) -> OptimizerConfig:
    """Per-cell optimizer configuration; 'gto' runs with both amendments off."""
    if algorithm == "gto":
        enable_obl = enable_qrg = False
    else:
        enable_obl = not cfg.disable_obl
        enable_qrg = not cfg.disable_qrg
    return OptimizerConfig(
        pop_size=cfg.pop_size,
        max_evals=cfg.max_evals,
        seed=seed,
        enable_obl=enable_obl,
        enable_qrg=enable_qrg,
    )


@dataclass(frozen=True)
class CellResult:
    algorithm: str
    function_id: str
    run: int
    seed: int
    best_fitness: float
    evals_used: int
    convergence: tuple
    mean_fitness: tuple


def _execute_cell(args) -> CellResult:
    cfg, algorithm, function_id, run = args
    seed = cell_seed(cfg.base_seed, algorithm, function_id, run)
    descriptor = benchmarks.descriptor(function_id)
    space = SearchSpace.cube(descriptor.bounds[0], descriptor.bounds[1], descriptor.dims)
    run_cfg = optimizer_config(cfg, algorithm, seed)
    if function_id == "F7":
        noise_rng = np.random.default_rng(_splitmix64(seed ^ _NOISE_SALT))
        objective = lambda x: benchmarks.evaluate(function_id, x, noise_rng)
    else:
        objective = lambda x: benchmarks.evaluate(function_id, x)
    result = run_optimizer(objective, space, run_cfg)
    if result.evals_used > cfg.max_evals:
        raise RuntimeError(f"cell {algorithm}/{function_id}/{run} exceeded its budget")
    return CellResult(
        algorithm=algorithm,
        function_id=function_id,
        run=run,
        seed=seed,
        best_fitness=result.best_fitness,
        evals_used=result.evals_used,
        convergence=result.convergence,
        mean_fitness=result.mean_fitness,
    )


def _fmt(value: float) -> str:
    # repr() is the shortest round-trip form, stable across runs
    return repr(float(value))


def _compare(reference_bests, other_bests) -> float:
    """Rank-sum p-value, NaN for degenerate comparisons (too few runs)."""
    if len(reference_bests) < 2 or len(other_bests) < 2:
        return math.nan
    return stats.wilcoxon_rank_sum(reference_bests, other_bests)


def _cell_key(algorithm: str, function_id: str, run: int) -> str:
    return f"{algorithm}/{function_id}/{run}"


class _Manifest:
    """Completed-cell index persisted after every cell (resume support)."""

    def __init__(self, path: Path):
        self.path = path
        self.cells = {}
        if path.exists():
            payload = json.loads(path.read_text())
            self.cells = payload.get("cells", {})

    def record(self, key: str, seed: int, best: float, evals_used: int):
        self.cells[key] = {"seed": seed, "best": best, "evals_used": evals_used}
        tmp = self.path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"version": 1, "cells": self.cells}, indent=0, sort_keys=True))
        os.replace(tmp, self.path)

    def __contains__(self, key: str) -> bool:
        return key in self.cells


def _write_convergence(cfg: ExperimentConfig, algorithm: str, result: CellResult):
    run_cfg = optimizer_config(cfg, algorithm, result.seed)
    start = init_eval_cost(run_cfg)
    step = evals_per_iteration(run_cfg)
    path = cfg.output_dir / "conv" / f"{algorithm}_{result.function_id}_{result.run}.csv"
    lines = ["iter,evals,best,mean"]
    for i, (best, mean) in enumerate(zip(result.convergence, result.mean_fitness)):
        lines.append(f"{i},{start + i * step},{_fmt(best)},{_fmt(mean)}")
    path.write_text("\n".join(lines) + "\n")


def _bests_by_cell(cfg: ExperimentConfig, manifest: _Manifest):
    table = {}
    for function_id in cfg.functions:
        for algorithm in cfg.algorithms:
            bests = []
            for run in range(cfg.runs):
                record = manifest.cells[_cell_key(algorithm, function_id, run)]
                bests.append(record["best"])
            table[(function_id, algorithm)] = bests
    return table


def _write_aggregates(cfg: ExperimentConfig, manifest: _Manifest):
    out = cfg.output_dir
    bests = _bests_by_cell(cfg, manifest)

    lines = ["function,algorithm,run,seed,best,evals_used"]
    for function_id in cfg.functions:
        for algorithm in cfg.algorithms:
            for run in range(cfg.runs):
                record = manifest.cells[_cell_key(algorithm, function_id, run)]
                lines.append(
                    f"{function_id},{algorithm},{run},{record['seed']},"
                    f"{_fmt(record['best'])},{record['evals_used']}"
                )
    (out / "results.csv").write_text("\n".join(lines) + "\n")

    summary = {}
    lines = ["function,algorithm,avg,std,runs"]
    for function_id in cfg.functions:
        for algorithm in cfg.algorithms:
            avg, std = stats.summarize(bests[(function_id, algorithm)])
            summary[(function_id, algorithm)] = (avg, std)
            lines.append(f"{function_id},{algorithm},{_fmt(avg)},{_fmt(std)},{cfg.runs}")
    (out / "summary.csv").write_text("\n".join(lines) + "\n")

    avg_matrix = [
        [summary[(f, a)][0] for a in cfg.algorithms] for f in cfg.functions
    ]
    std_matrix = [
        [summary[(f, a)][1] for a in cfg.algorithms] for f in cfg.functions
    ]
    table = stats.friedman_ranks(avg_matrix, std_matrix)
    lines = ["function,algorithm,rank"]
    for i, function_id in enumerate(cfg.functions):
        for k, algorithm in enumerate(cfg.algorithms):
            lines.append(f"{function_id},{algorithm},{table.per_function_ranks[i][k]}")
    for k, algorithm in enumerate(cfg.algorithms):
        lines.append(f"rank_sum,{algorithm},{table.rank_sum[k]}")
    for k, algorithm in enumerate(cfg.algorithms):
        lines.append(f"average_rank,{algorithm},{_fmt(table.average_rank[k])}")
    for k, algorithm in enumerate(cfg.algorithms):
        lines.append(f"final_rank,{algorithm},{table.final_rank[k]}")
    (out / "ranks.csv").write_text("\n".join(lines) + "\n")

    reference = (
        REFERENCE_ALGORITHM if REFERENCE_ALGORITHM in cfg.algorithms else cfg.algorithms[0]
    )
    lines = ["function,algorithm,p_value"]
    for function_id in cfg.functions:
        for algorithm in cfg.algorithms:
            if algorithm == reference:
                p = math.nan
            else:
                p = _compare(bests[(function_id, reference)], bests[(function_id, algorithm)])
            lines.append(f"{function_id},{algorithm},{'NaN' if math.isnan(p) else _fmt(p)}")
    (out / "pvalues.csv").write_text("\n".join(lines) + "\n")

    return table


def run_campaign(cfg: ExperimentConfig):
    """Execute every pending cell, then (re)write all aggregate files.

    Returns the final rank table. Output ordering is canonical (functions in
    suite order, algorithms in configured order, runs ascending) regardless
    of completion order, so reruns and resumed runs are byte-identical.
    """
    out = cfg.output_dir
    try:
        (out / "conv").mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise OSError(f"output directory {out} is not writable: {exc}") from exc

    manifest = _Manifest(out / "manifest.json")
    pending = [
        (cfg, algorithm, function_id, run)
        for function_id in cfg.functions
        for algorithm in cfg.algorithms
        for run in range(cfg.runs)
        if _cell_key(algorithm, function_id, run) not in manifest
    ]

    def record(result: CellResult):
        _write_convergence(cfg, result.algorithm, result)
        manifest.record(
            _cell_key(result.algorithm, result.function_id, result.run),
            result.seed,
            result.best_fitness,
            result.evals_used,
        )

    if cfg.workers > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for result in pool.map(_execute_cell, pending, chunksize=1):
                record(result)
    else:
        for args in pending:
            record(_execute_cell(args))

    table = _write_aggregates(cfg, manifest)
    order = sorted(range(len(cfg.algorithms)), key=lambda k: table.final_rank[k])
    ranking = "  ".join(
        f"{cfg.algorithms[k]}: final_rank={table.final_rank[k]} "
        f"average_rank={table.average_rank[k]:.3f}"
        for k in order
    )
    print(f"campaign complete — {ranking}")
    return table


def _parse_results_csv(path: Path):
    """Per-run bests keyed by (function, algorithm), with strict row parsing."""
    if not path.exists():
        raise FileNotFoundError(f"missing results file: {path}")
    bests = {}
    functions, algorithms = [], []
    with path.open() as handle:
        header = handle.readline().rstrip("\n")
        if header != "function,algorithm,run,seed,best,evals_used":
            raise ValueError(f"{path}:1: unexpected header {header!r}")
        for lineno, line in enumerate(handle, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 6:
                raise ValueError(f"{path}:{lineno}: expected 6 fields, got {len(parts)}")
            function_id, algorithm = parts[0], parts[1]
            try:
                best = float(parts[4])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad best value {parts[4]!r}") from None
            bests.setdefault((function_id, algorithm), []).append(best)
            if function_id not in functions:
                functions.append(function_id)
            if algorithm not in algorithms:
                algorithms.append(algorithm)
    return bests, functions, algorithms


def report(output_dir) -> str:
    """Recompute and print the rank table and p-value matrix from stored
    per-run bests; returns the printed text."""
    out = Path(output_dir)
    bests, functions, algorithms = _parse_results_csv(out / "results.csv")

    avg_matrix, std_matrix = [], []
    for function_id in functions:
        avg_row, std_row = [], []
        for algorithm in algorithms:
            avg, std = stats.summarize(bests[(function_id, algorithm)])
            avg_row.append(avg)
            std_row.append(std)
        avg_matrix.append(avg_row)
        std_matrix.append(std_row)
    table = stats.friedman_ranks(avg_matrix, std_matrix)

    reference = REFERENCE_ALGORITHM if REFERENCE_ALGORITHM in algorithms else algorithms[0]
    lines = []
    header = f"{'function':10s}" + "".join(f"{a:>14s}" for a in algorithms)
    lines.append(header + f"{'':4s}p vs {reference}")
    for i, function_id in enumerate(functions):
        avg_cells = "".join(f"{avg_matrix[i][k]:14.4e}" for k in range(len(algorithms)))
        p_cells = []
        for algorithm in algorithms:
            if algorithm == reference:
                continue
            p = _compare(bests[(function_id, reference)], bests[(function_id, algorithm)])
            p_cells.append(f"{algorithm}={'NaN' if math.isnan(p) else format(p, '.3e')}")
        lines.append(f"{function_id:10s}" + avg_cells + "    " + " ".join(p_cells))
    lines.append(
        "rank_sum  " + "".join(f"{table.rank_sum[k]:>14d}" for k in range(len(algorithms)))
    )
    lines.append(
        "avg_rank  "
        + "".join(f"{table.average_rank[k]:14.3f}" for k in range(len(algorithms)))
    )
    lines.append(
        "final_rank" + "".join(f"{table.final_rank[k]:>14d}" for k in range(len(algorithms)))
    )
    text = "\n".join(lines)
    print(text)
    return text
