"""Run every (instance, algorithm) pair and tabulate iteration counts."""

from __future__ import annotations

import csv
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import ConfigError, DefbalError
from ..lasso import make_instance
from ..solvers import ALGORITHMS, RunRecord, run
from .instances import GeneratorSpec, generate_instance, load_csv_instance
from .params import default_config, default_suite

log = logging.getLogger(__name__)

RESULT_COLUMNS = ["instance", "algorithm", "outer_iters", "inner_iters", "residual",
                  "objective", "status", "wall_time_ms"]
TRACE_COLUMNS = ["k", "j", "U", "S", "A", "Delta", "rho", "residual"]
SUMMARY_LABEL = "geometric_mean"
ERROR = "error"


def geometric_mean(values) -> float:
    values = list(values)
    if not values:
        raise ValueError("geometric mean of an empty list")
    if any(not v > 0 for v in values):
        raise ValueError("geometric mean needs strictly positive values")
    return math.exp(math.fsum(math.log(v) for v in values) / len(values))


@dataclass(frozen=True)
class InstanceSource:
    """A named instance: either a generator spec or a CSV path prefix."""

    name: str
    category: str = "pixel"
    spec: Optional[GeneratorSpec] = None
    path: Optional[str] = None

    def __post_init__(self):
        if (self.spec is None) == (self.path is None):
            raise ConfigError(f"instance {self.name!r} needs exactly one of spec / path")

    def materialize(self, seed: int):
        if self.spec is not None:
            A, b, _ = generate_instance(self.spec, seed)
        else:
            A, b = load_csv_instance(self.path)
        return make_instance(A, b, self.name)


@dataclass(frozen=True)
class AlgorithmSpec:
    """Algorithm id plus parameter overrides applied on top of category defaults."""

    algorithm: str
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")

    def resolve(self, category: str):
        return default_config(self.algorithm, category, **self.overrides)


@dataclass
class BenchConfig:
    instances: list
    algorithms: list
    seed: int = 0
    output_dir: Optional[Path] = None
    emit_traces: bool = False
    workers: int = 1

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @classmethod
    def default(cls, **kw) -> "BenchConfig":
        instances = [InstanceSource(e.name, e.category, spec=e.spec) for e in default_suite()]
        algorithms = [AlgorithmSpec(a) for a in ALGORITHMS]
        return cls(instances, algorithms, **kw)


@dataclass
class RunResult:
    instance: str
    algorithm: str
    record: Optional[RunRecord]
    wall_time_ms: float
    error: str = ""

    @property
    def status(self) -> str:
        return self.record.status if self.record is not None else ERROR

    def row(self) -> dict:
        rec = self.record
        return {
            "instance": self.instance,
            "algorithm": self.algorithm,
            "outer_iters": rec.outer_iterations if rec else 0,
            "inner_iters": rec.inner_iterations_cumulative if rec else 0,
            "residual": repr(float(rec.final_residual)) if rec else "",
            "objective": repr(float(rec.final_objective)) if rec else "",
            "status": self.status,
            "wall_time_ms": f"{self.wall_time_ms:.3f}",
        }


def _run_one(source: InstanceSource, alg: AlgorithmSpec, seed: int) -> RunResult:
    t0 = time.perf_counter()
    try:
        inst = source.materialize(seed)
        rec = run(inst, alg.resolve(source.category))
    except (DefbalError, ValueError, ArithmeticError) as exc:
        log.error("%s / %s failed: %s", source.name, alg.algorithm, exc)
        return RunResult(source.name, alg.algorithm, None,
                         1e3 * (time.perf_counter() - t0), str(exc))
    return RunResult(source.name, alg.algorithm, rec, 1e3 * (time.perf_counter() - t0))


def summary_rows(results) -> list[dict]:
    """One geometric-mean row per algorithm, in first-appearance order."""
    order = []
    groups = {}
    for r in results:
        if r.algorithm not in groups:
            order.append(r.algorithm)
            groups[r.algorithm] = []
        groups[r.algorithm].append(r)
    rows = []
    for alg in order:
        ok = [r for r in groups[alg] if r.record is not None and r.record.outer_iterations > 0]
        n_conv = sum(1 for r in groups[alg] if r.record is not None and r.record.converged)
        rows.append({
            "instance": SUMMARY_LABEL,
            "algorithm": alg,
            "outer_iters": repr(geometric_mean(r.record.outer_iterations for r in ok)) if ok else "",
            "inner_iters": repr(geometric_mean(r.record.inner_iterations_cumulative for r in ok)) if ok else "",
            "residual": "",
            "objective": "",
            "status": f"{n_conv}/{len(groups[alg])}",
            "wall_time_ms": "",
        })
    return rows


def write_results(path, results) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=RESULT_COLUMNS)
        w.writeheader()
        for r in results:
            w.writerow(r.row())
        for row in summary_rows(results):
            w.writerow(row)
    return path


def read_results(path) -> list[dict]:
    """Parse a results CSV back into typed rows (summary rows included)."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            typed = dict(row)
            summary = row["instance"] == SUMMARY_LABEL
            for key in ("outer_iters", "inner_iters"):
                if row[key] != "":
                    typed[key] = float(row[key]) if summary else int(row[key])
            for key in ("residual", "objective", "wall_time_ms"):
                typed[key] = float(row[key]) if row[key] != "" else None
            out.append(typed)
    return out


def write_trace(path, record: RunRecord) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_COLUMNS)
        for t in record.trace:
            w.writerow([t.k, t.j] + [repr(float(v)) for v in (t.U, t.S, t.A, t.Delta, t.rho, t.residual)])
    return path


def run_matrix(cfg: BenchConfig) -> list[RunResult]:
    """Run all pairs; results come back ordered by (instance, algorithm) config order."""
    jobs = [(src, alg) for src in cfg.instances for alg in cfg.algorithms]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_run_one, src, alg, cfg.seed) for src, alg in jobs]
            results = [f.result() for f in futures]
    else:
        results = [_run_one(src, alg, cfg.seed) for src, alg in jobs]
    for r in results:
        log.info("%-14s %-16s outer=%6d inner=%7d %s", r.instance, r.algorithm,
                 r.record.outer_iterations if r.record else 0,
                 r.record.inner_iterations_cumulative if r.record else 0, r.status)
    if cfg.output_dir is not None:
        out = Path(cfg.output_dir)
        write_results(out / "results.csv", results)
        if cfg.emit_traces:
            for r in results:
                if r.record is not None:
                    write_trace(out / "traces" / f"{r.instance}__{r.algorithm}.csv", r.record)
    return results
