"""Full runs: the four inexact ALM variants and plain ADMM on a LASSO instance."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import core
from .core import OuterState, RelaxationDecision, SubproblemStats
from .errors import ConfigError, ContractError
from .inner import InnerState, adss_step, fista_cd_step, start_inner
from .lasso import (ProblemInstance, XSolverCache, kkt_residual_inf, objective,
                    solve_x_subproblem, solve_z_subproblem)

log = logging.getLogger(__name__)

ALM_ADSS = "alm_adss"
ALM_AR_ADSS = "alm_ar_adss"
ALM_FISTA_CD = "alm_fista_cd"
ALM_AR_FISTA_CD = "alm_ar_fista_cd"
ADMM = "admm"
ALGORITHMS = (ADMM, ALM_FISTA_CD, ALM_AR_FISTA_CD, ALM_ADSS, ALM_AR_ADSS)
ALM_VARIANTS = ALGORITHMS[1:]

CONVERGED = "converged"
MAX_OUTER = "max_outer"
MAX_INNER = "max_inner"
EXACT_OPTIMUM = "exact_optimum"


@dataclass(frozen=True)
class AlgorithmConfig:
    algorithm: str
    c: float
    epsilon: float = 0.1
    a: float = 3.0
    J1: int = 0
    Jr: Optional[int] = None  # None disables the w reset
    delta: float = 1e-6
    max_outer: int = 100_000
    max_inner: int = 10_000
    gamma_rule: str = "max"
    gamma_value: Optional[float] = None
    tol_zero: float = core.TOL_ZERO
    residual_at: str = "z"  # point at which termination evaluates the KKT residual

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if not self.c > 0:
            raise ConfigError(f"c must be positive, got {self.c}")
        if not 0 < self.epsilon < 1:
            raise ConfigError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not self.a > 2:
            raise ConfigError(f"a must exceed 2, got {self.a}")
        if self.J1 < 0:
            raise ConfigError(f"J1 must be nonnegative, got {self.J1}")
        if self.Jr is not None and self.Jr < 1:
            raise ConfigError(f"Jr must be positive, got {self.Jr}")
        if not self.delta > 0:
            raise ConfigError(f"delta must be positive, got {self.delta}")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ConfigError("iteration caps must be positive")
        if self.residual_at not in ("x", "z"):
            raise ConfigError(f"residual_at must be 'x' or 'z', got {self.residual_at!r}")
        try:
            core.make_gamma_rule(self.gamma_rule, self.gamma_value)
        except ContractError as exc:
            raise ConfigError(str(exc)) from None

    @property
    def adaptive(self) -> bool:
        return self.algorithm in (ALM_AR_ADSS, ALM_AR_FISTA_CD)

    @property
    def uses_fista(self) -> bool:
        return self.algorithm in (ALM_FISTA_CD, ALM_AR_FISTA_CD)


@dataclass
class TraceRow:
    k: int
    j: int
    U: float
    S: float
    A: float
    Delta: float
    rho: float
    residual: float


@dataclass
class RunRecord:
    algorithm: str
    outer_iterations: int = 0
    inner_iterations_cumulative: int = 0
    final_residual: float = float("inf")
    final_objective: float = float("nan")
    status: str = MAX_OUTER
    rho_trace: list = field(default_factory=list)
    residual_trace: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    x: Optional[np.ndarray] = None
    z: Optional[np.ndarray] = None
    p: Optional[np.ndarray] = None

    @property
    def converged(self) -> bool:
        return self.status in (CONVERGED, EXACT_OPTIMUM)


@dataclass(frozen=True)
class OuterStep:
    """Everything a monitor needs to audit one accepted outer iteration.

    ``updated`` is the state straight out of the multiplier step; ``state`` is
    what the next iteration starts from (they differ only by a w reset).
    """

    before: OuterState
    updated: OuterState
    state: OuterState
    inner: InnerState
    stats: SubproblemStats
    decision: RelaxationDecision
    p_bar: np.ndarray
    reset: bool
    residual: float


def _finish(rec: RunRecord, inst, cfg, x, z, p, status):
    rec.status = status
    rec.x, rec.z, rec.p = x, z, p
    point = x if cfg.residual_at == "x" else z
    rec.final_residual = kkt_residual_inf(inst, point)
    rec.final_objective = objective(inst, point)
    return rec


def run_alm(inst: ProblemInstance, cfg: AlgorithmConfig, *,
            cache: Optional[XSolverCache] = None,
            p0=None, z0=None,
            monitor: Optional[Callable[[OuterStep], None]] = None,
            accept_rule: Optional[Callable[[InnerState, SubproblemStats], bool]] = None) -> RunRecord:
    """Inexact ALM with an ADSS or FISTA-CD inner loop.

    ``accept_rule`` overrides the acceptance test (used in tests to force
    near-exact subproblem solves); the relaxation factor is still computed by
    the configured mode.
    """
    if cfg.algorithm not in ALM_VARIANTS:
        raise ConfigError(f"run_alm cannot run {cfg.algorithm!r}")
    if cache is None or cache.c != cfg.c:
        cache = XSolverCache(inst, cfg.c)
    n, m = inst.n, inst.m
    mode = core.ADAPTIVE if cfg.adaptive else core.FIXED_UNIT
    gamma_rule = core.make_gamma_rule(cfg.gamma_rule, cfg.gamma_value)
    state = OuterState.zeros(n, m, cfg.c, cfg.epsilon)
    if p0 is not None:
        state = replace(state, p=np.array(p0, dtype=float))
    z = np.zeros(m) if z0 is None else np.array(z0, dtype=float)
    x = np.zeros(n)

    rec = RunRecord(cfg.algorithm)
    for k in range(cfg.max_outer):
        it = start_inner(z, n)
        while True:
            if it.j >= cfg.max_inner:
                log.warning("%s: inner loop hit max_inner=%d at outer iteration %d",
                            cfg.algorithm, cfg.max_inner, k)
                return _finish(rec, inst, cfg, it.x, it.z, state.p, MAX_INNER)
            if cfg.uses_fista:
                it = fista_cd_step(it, state, inst, cache, cfg.a)
            else:
                it = adss_step(it, state, inst, cache)
            rec.inner_iterations_cumulative += 1
            stats = core.compute_stats(it.x, it.z, it.Mx, it.s, state)
            if core.declare_exact_optimum(stats, cfg.tol_zero):
                rec.outer_iterations = k + 1
                return _finish(rec, inst, cfg, it.x, it.z, state.p, EXACT_OPTIMUM)
            if accept_rule is not None:
                if accept_rule(it, stats) and stats.A < stats.U and stats.Delta >= 0:
                    break
            elif core.acceptance_test(stats, mode, it.j, cfg.J1, cfg.epsilon) == core.ACCEPT:
                break

        decision = core.relaxation_factor(stats, gamma_rule, cfg.epsilon) if cfg.adaptive else core.unit_decision()
        updated, p_bar = core.outer_update(state, it.x, it.z, it.u, it.s, decision.rho)
        x, z = it.x, it.z
        reset = cfg.Jr is not None and it.j > cfg.Jr
        nxt = replace(updated, w_x=x.copy(), w_z=z.copy()) if reset else updated
        residual = kkt_residual_inf(inst, x if cfg.residual_at == "x" else z)

        rec.outer_iterations = k + 1
        rec.rho_trace.append(decision.rho)
        rec.residual_trace.append(residual)
        rec.trace.append(TraceRow(k, it.j, stats.U, stats.S, stats.A, stats.Delta,
                                  decision.rho, residual))
        if monitor is not None:
            monitor(OuterStep(state, updated, nxt, it, stats, decision, p_bar, reset, residual))
        state = nxt
        if residual <= cfg.delta:
            return _finish(rec, inst, cfg, x, z, state.p, CONVERGED)
    return _finish(rec, inst, cfg, x, z, state.p, MAX_OUTER)


def run_admm(inst: ProblemInstance, cfg: AlgorithmConfig, *,
             cache: Optional[XSolverCache] = None, p0=None, z0=None) -> RunRecord:
    """Classical ADMM: one x/z sweep per multiplier update, constant c."""
    if cfg.algorithm != ADMM:
        raise ConfigError(f"run_admm cannot run {cfg.algorithm!r}")
    if cache is None or cache.c != cfg.c:
        cache = XSolverCache(inst, cfg.c)
    c = cfg.c
    p = np.zeros(inst.m) if p0 is None else np.array(p0, dtype=float)
    z = np.zeros(inst.m) if z0 is None else np.array(z0, dtype=float)
    x = np.zeros(inst.n)
    rec = RunRecord(ADMM)
    for k in range(cfg.max_outer):
        x = solve_x_subproblem(inst, cache, p, c, z)
        z = solve_z_subproblem(inst, p, c, x)
        p = p + c * (x - z)
        residual = kkt_residual_inf(inst, x if cfg.residual_at == "x" else z)
        rec.outer_iterations = rec.inner_iterations_cumulative = k + 1
        rec.residual_trace.append(residual)
        d = z - x
        rec.trace.append(TraceRow(k, 1, float(d @ d), float("nan"), float("nan"),
                                  float("nan"), 1.0, residual))
        if residual <= cfg.delta:
            return _finish(rec, inst, cfg, x, z, p, CONVERGED)
    return _finish(rec, inst, cfg, x, z, p, MAX_OUTER)


def run(inst: ProblemInstance, cfg: AlgorithmConfig, **kwargs) -> RunRecord:
    if cfg.algorithm == ADMM:
        return run_admm(inst, cfg, **kwargs)
    return run_alm(inst, cfg, **kwargs)
