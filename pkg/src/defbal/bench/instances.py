"""Instance sources: CSV pairs on disk and seeded synthetic draws.

File format: ``<name>.A.csv`` holds the raw matrix (one row per observation,
no header) and ``<name>.b.csv`` the raw target (one value per line).  Values
are written with ``repr`` so a write/load round trip is bit exact.

Synthetic draws use ``numpy.random.Generator(PCG64(seed))`` and consume the
stream in a fixed order: A (row-major standard normals), support positions,
signs, noise.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigError, ParseError


@dataclass(frozen=True)
class GeneratorSpec:
    obs: int
    n: int
    sparsity: float = 0.05
    noise_sigma: float = 0.01
    seed_offset: int = 0

    def __post_init__(self):
        if self.obs < 1 or self.n < 1:
            raise ConfigError(f"need obs >= 1 and n >= 1, got {self.obs}x{self.n}")
        if not 0 < self.sparsity <= 1:
            raise ConfigError(f"sparsity must lie in (0, 1], got {self.sparsity}")
        if self.noise_sigma < 0:
            raise ConfigError(f"noise_sigma must be nonnegative, got {self.noise_sigma}")


def generate_instance(spec: GeneratorSpec, seed: int):
    """Return raw ``(A, b, x_true)`` with ``b = A x_true + noise``."""
    rng = np.random.Generator(np.random.PCG64(seed + spec.seed_offset))
    A = rng.standard_normal((spec.obs, spec.n))
    k = math.ceil(spec.sparsity * spec.n)
    support = rng.choice(spec.n, size=k, replace=False)
    signs = rng.choice(np.array([-1.0, 1.0]), size=k)
    x_true = np.zeros(spec.n)
    x_true[support] = signs
    noise = rng.standard_normal(spec.obs)
    b = A @ x_true + spec.noise_sigma * noise
    return A, b, x_true


def csv_paths(prefix) -> tuple[Path, Path]:
    prefix = str(prefix)
    return Path(prefix + ".A.csv"), Path(prefix + ".b.csv")


def _read_rows(path: Path):
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                rows.append((lineno, [float(cell) for cell in row]))
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-numeric cell in {row!r}") from None
    return rows


def load_csv_instance(prefix):
    """Load raw ``(A, b)`` from ``<prefix>.A.csv`` / ``<prefix>.b.csv``."""
    a_path, b_path = csv_paths(prefix)
    for p in (a_path, b_path):
        if not p.exists():
            raise ParseError(f"{p}: no such file")
    a_rows = _read_rows(a_path)
    if not a_rows:
        raise ParseError(f"{a_path}: no data rows")
    width = len(a_rows[0][1])
    for lineno, row in a_rows:
        if len(row) != width:
            raise ParseError(f"{a_path}:{lineno}: ragged row ({len(row)} cells, expected {width})")
    b_rows = _read_rows(b_path)
    for lineno, row in b_rows:
        if len(row) != 1:
            raise ParseError(f"{b_path}:{lineno}: expected one value per line, got {len(row)}")
    if len(b_rows) != len(a_rows):
        raise ParseError(
            f"{b_path}:{b_rows[-1][0] if b_rows else 0}: {len(b_rows)} target values "
            f"for {len(a_rows)} matrix rows"
        )
    A = np.array([row for _, row in a_rows])
    b = np.array([row[0] for _, row in b_rows])
    return A, b


def write_csv_instance(prefix, A, b) -> tuple[Path, Path]:
    a_path, b_path = csv_paths(prefix)
    a_path.parent.mkdir(parents=True, exist_ok=True)
    with open(a_path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in np.asarray(A, dtype=float):
            w.writerow([repr(float(v)) for v in row])
    with open(b_path, "w", newline="") as fh:
        w = csv.writer(fh)
        for v in np.asarray(b, dtype=float).reshape(-1):
            w.writerow([repr(float(v))])
    return a_path, b_path
