"""Benchmark harness: instance sources, run matrix, CSV reporting, CLI."""

from .harness import (AlgorithmSpec, BenchConfig, InstanceSource, RunResult, geometric_mean,
                      read_results, run_matrix, write_results, write_trace)
from .instances import GeneratorSpec, generate_instance, load_csv_instance, write_csv_instance
from .params import default_config, default_suite

__all__ = [
    "AlgorithmSpec", "BenchConfig", "GeneratorSpec", "InstanceSource", "RunResult",
    "default_config", "default_suite", "generate_instance", "geometric_mean",
    "load_csv_instance", "read_results", "run_matrix", "write_csv_instance",
    "write_results", "write_trace",
]
