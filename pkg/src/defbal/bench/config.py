"""INI-style benchmark configuration.

    [bench]
    seed = 0
    output_dir = results
    emit_traces = yes
    workers = 1
    suite = default            ; add the 9-instance desk-scale suite

    [instance:colon]
    category = gene
    path = data/colon          ; reads data/colon.A.csv and data/colon.b.csv

    [instance:tall]
    category = engine
    obs = 500
    n = 12
    sparsity = 0.5
    noise = 0.01
    seed_offset = 7

    [algorithm:alm_ar_fista_cd]
    c = 4                      ; overrides the category default
    j1 = 6
    jr = none                  ; disables the w reset

With no ``[instance:*]`` section the default suite is used; with no
``[algorithm:*]`` section all five algorithms run on category defaults.
Relative ``path`` values resolve against the config file's directory.
"""

from __future__ import annotations

import configparser
from pathlib import Path

from ..errors import ConfigError
from ..solvers import ALGORITHMS
from .harness import AlgorithmSpec, BenchConfig, InstanceSource
from .instances import GeneratorSpec
from .params import CATEGORIES, default_suite

_FLOAT_KEYS = {"c": "c", "epsilon": "epsilon", "a": "a", "delta": "delta",
               "gamma_value": "gamma_value", "tol_zero": "tol_zero"}
_INT_KEYS = {"j1": "J1", "max_outer": "max_outer", "max_inner": "max_inner"}
_STR_KEYS = {"gamma_rule": "gamma_rule", "residual_at": "residual_at"}


def parse_jr(value: str):
    if value.strip().lower() in ("none", "inf", "off", ""):
        return None
    return int(value)


def algorithm_overrides(section) -> dict:
    out = {}
    for key, raw in section.items():
        try:
            if key in _FLOAT_KEYS:
                out[_FLOAT_KEYS[key]] = float(raw)
            elif key in _INT_KEYS:
                out[_INT_KEYS[key]] = int(raw)
            elif key in _STR_KEYS:
                out[_STR_KEYS[key]] = raw.strip()
            elif key == "jr":
                out["Jr"] = parse_jr(raw)
            else:
                raise ConfigError(f"[{section.name}]: unknown key {key!r}")
        except ValueError as exc:
            raise ConfigError(f"[{section.name}] {key} = {raw!r}: {exc}") from None
    return out


def _instance(name: str, section, base: Path) -> InstanceSource:
    category = section.get("category", "pixel").strip()
    if category not in CATEGORIES:
        raise ConfigError(f"[instance:{name}]: unknown category {category!r}")
    if "path" in section:
        path = Path(section["path"])
        if not path.is_absolute():
            path = base / path
        return InstanceSource(name, category, path=str(path))
    try:
        spec = GeneratorSpec(
            obs=section.getint("obs"),
            n=section.getint("n"),
            sparsity=section.getfloat("sparsity", 0.05),
            noise_sigma=section.getfloat("noise", 0.01),
            seed_offset=section.getint("seed_offset", 0),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[instance:{name}]: {exc}") from None
    return InstanceSource(name, category, spec=spec)


def load_config(path) -> BenchConfig:
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if not parser.read(path):
        raise ConfigError(f"{path}: cannot read config file")
    bench = parser["bench"] if parser.has_section("bench") else parser[parser.default_section]

    instances = []
    if bench.get("suite", "").strip() == "default":
        instances.extend(InstanceSource(e.name, e.category, spec=e.spec) for e in default_suite())
    algorithms = []
    for name in parser.sections():
        kind, _, label = name.partition(":")
        if kind == "instance":
            instances.append(_instance(label, parser[name], path.parent))
        elif kind == "algorithm":
            if label not in ALGORITHMS:
                raise ConfigError(f"[{name}]: unknown algorithm; choose from {ALGORITHMS}")
            algorithms.append(AlgorithmSpec(label, algorithm_overrides(parser[name])))
        elif name != "bench":
            raise ConfigError(f"unknown section [{name}]")
    if not instances:
        instances = [InstanceSource(e.name, e.category, spec=e.spec) for e in default_suite()]
    if not algorithms:
        algorithms = [AlgorithmSpec(a) for a in ALGORITHMS]

    out_dir = bench.get("output_dir")
    if out_dir is not None:
        out_dir = Path(out_dir)
        if not out_dir.is_absolute():
            out_dir = path.parent / out_dir
    try:
        return BenchConfig(
            instances=instances,
            algorithms=algorithms,
            seed=bench.getint("seed", 0),
            output_dir=out_dir,
            emit_traces=bench.getboolean("emit_traces", False),
            workers=bench.getint("workers", 1),
        )
    except ValueError as exc:
        raise ConfigError(f"[bench]: {exc}") from None
