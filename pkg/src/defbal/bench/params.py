"""Per-category parameter bindings and the default desk-scale suite.

Penalty, J1 and Jr values follow the published per-category tuning for the
three dataset families; the desk-scale shapes are scaled-down stand-ins.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..solvers import (ADMM, ALM_ADSS, ALM_AR_ADSS, ALM_AR_FISTA_CD, ALM_FISTA_CD,
                       AlgorithmConfig)
from ..errors import ConfigError
from .instances import GeneratorSpec

CATEGORIES = ("pixel", "gene", "engine")

PENALTY = {
    "pixel": {ADMM: 2, ALM_FISTA_CD: 3, ALM_AR_FISTA_CD: 3, ALM_ADSS: 2, ALM_AR_ADSS: 2},
    "gene": {ADMM: 2, ALM_FISTA_CD: 4, ALM_AR_FISTA_CD: 4, ALM_ADSS: 3, ALM_AR_ADSS: 7},
    "engine": {ADMM: 0.01, ALM_FISTA_CD: 0.007, ALM_AR_FISTA_CD: 0.009,
               ALM_ADSS: 0.0007, ALM_AR_ADSS: 0.0006},
}

# strengthened (rho >= 1) acceptance for the first J1 inner steps; adaptive variants only
J1 = {
    "pixel": {ALM_AR_FISTA_CD: 2, ALM_AR_ADSS: 1},
    "gene": {ALM_AR_FISTA_CD: 6, ALM_AR_ADSS: 1},
    "engine": {ALM_AR_FISTA_CD: 6, ALM_AR_ADSS: 1},
}

JR = {
    "pixel": {ALM_FISTA_CD: 3, ALM_AR_FISTA_CD: 4, ALM_ADSS: 4, ALM_AR_ADSS: 1},
    "gene": {ALM_FISTA_CD: 3, ALM_AR_FISTA_CD: 2, ALM_ADSS: 10, ALM_AR_ADSS: 1},
    "engine": {ALM_FISTA_CD: 10, ALM_AR_FISTA_CD: 7, ALM_ADSS: 10, ALM_AR_ADSS: 1},
}


@dataclass(frozen=True)
class SuiteEntry:
    name: str
    category: str
    spec: GeneratorSpec


SHAPES = {
    "pixel": dict(obs=100, n=400, sparsity=0.05),
    "gene": dict(obs=40, n=800, sparsity=0.02),
    "engine": dict(obs=2000, n=24, sparsity=0.5),
}
NOISE_SIGMA = 0.01
SEEDS_PER_CATEGORY = 3


def default_suite() -> list[SuiteEntry]:
    out = []
    for ci, cat in enumerate(CATEGORIES):
        for r in range(SEEDS_PER_CATEGORY):
            spec = GeneratorSpec(noise_sigma=NOISE_SIGMA, seed_offset=100 * ci + r, **SHAPES[cat])
            out.append(SuiteEntry(f"{cat}-like-{r}", cat, spec))
    return out


def default_config(algorithm: str, category: str, **overrides) -> AlgorithmConfig:
    if category not in CATEGORIES:
        raise ConfigError(f"unknown category {category!r}; choose from {CATEGORIES}")
    kw = dict(
        algorithm=algorithm,
        c=PENALTY[category][algorithm],
        J1=J1[category].get(algorithm, 0),
        Jr=JR[category].get(algorithm),
    )
    kw.update(overrides)
    return AlgorithmConfig(**kw)
