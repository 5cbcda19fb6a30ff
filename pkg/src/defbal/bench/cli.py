"""Command line front end: ``bench run``, ``bench solve``, ``bench gen``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from pathlib import Path

from ..errors import DefbalError
from ..lasso import make_instance
from ..solvers import ALGORITHMS, run
from . import config as config_mod
from .harness import (RESULT_COLUMNS, RunResult, run_matrix, summary_rows, write_trace)
from .instances import GeneratorSpec, csv_paths, generate_instance, load_csv_instance, write_csv_instance
from .params import CATEGORIES, default_config, default_suite

log = logging.getLogger("defbal.bench")


def _print_rows(rows, out=None):
    w = csv.DictWriter(out or sys.stdout, fieldnames=RESULT_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)


def cmd_run(args) -> int:
    cfg = config_mod.load_config(args.config)
    if args.output_dir is not None:
        cfg.output_dir = Path(args.output_dir)
    if args.workers is not None:
        cfg.workers = args.workers
    if args.traces:
        cfg.emit_traces = True
    results = run_matrix(cfg)
    _print_rows([r.row() for r in results] + summary_rows(results))
    return 0 if all(r.record is not None and r.record.converged for r in results) else 1


def _resolve_instance(name: str, seed: int, category):
    a_path, _ = csv_paths(name)
    if a_path.exists():
        A, b = load_csv_instance(name)
        return make_instance(A, b, Path(name).name), category or "pixel"
    for entry in default_suite():
        if entry.name == name:
            A, b, _ = generate_instance(entry.spec, seed)
            return make_instance(A, b, name), category or entry.category
    raise DefbalError(f"{name!r} is neither a CSV instance prefix nor a default-suite name")


def cmd_solve(args) -> int:
    inst, category = _resolve_instance(args.instance, args.seed, args.category)
    overrides = {}
    for key, attr in (("c", "c"), ("epsilon", "epsilon"), ("a", "a"), ("J1", "j1"),
                      ("delta", "delta"), ("max_outer", "max_outer"),
                      ("max_inner", "max_inner"), ("gamma_rule", "gamma_rule"),
                      ("gamma_value", "gamma_value"), ("residual_at", "residual_at")):
        value = getattr(args, attr)
        if value is not None:
            overrides[key] = value
    if args.jr is not None:
        overrides["Jr"] = config_mod.parse_jr(args.jr)
    cfg = default_config(args.algorithm, category, **overrides)
    t0 = time.perf_counter()
    rec = run(inst, cfg)
    result = RunResult(inst.name, cfg.algorithm, rec, 1e3 * (time.perf_counter() - t0))
    _print_rows([result.row()])
    if args.trace is not None:
        path = args.trace or f"{inst.name}__{cfg.algorithm}.trace.csv"
        write_trace(path, rec)
        log.info("trace written to %s", path)
    return 0 if rec.converged else 1


def cmd_gen(args) -> int:
    spec = GeneratorSpec(args.obs, args.n, args.sparsity, args.noise)
    A, b, x_true = generate_instance(spec, args.seed)
    a_path, b_path = write_csv_instance(args.out, A, b)
    x_path = Path(str(args.out) + ".x.csv")
    with open(x_path, "w", newline="") as fh:
        w = csv.writer(fh)
        for v in x_true:
            w.writerow([repr(float(v))])
    print(f"{a_path}\n{b_path}\n{x_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bench", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the instance x algorithm matrix from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir")
    p.add_argument("--workers", type=int)
    p.add_argument("--traces", action="store_true", help="write per-run trace CSVs")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("solve", help="solve one instance with one algorithm")
    p.add_argument("--instance", required=True,
                   help="CSV path prefix (<name>.A.csv/<name>.b.csv) or a default-suite name")
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument("--category", choices=CATEGORIES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--j1", type=int)
    p.add_argument("--jr", help="integer threshold, or 'none' to disable the reset")
    p.add_argument("--delta", type=float)
    p.add_argument("--max-outer", type=int)
    p.add_argument("--max-inner", type=int)
    p.add_argument("--gamma-rule", choices=("max", "mid", "fixed"))
    p.add_argument("--gamma-value", type=float)
    p.add_argument("--residual-at", choices=("x", "z"))
    p.add_argument("--trace", nargs="?", const="", default=None, metavar="PATH",
                   help="write the per-iteration trace CSV (default name if PATH omitted)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="write a synthetic raw instance as CSV")
    p.add_argument("--obs", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sparsity", type=float, default=0.05)
    p.add_argument("--noise", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except DefbalError as exc:
        print(f"bench: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
