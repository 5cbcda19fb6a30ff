"""Outer-loop arithmetic of the relative-error augmented Lagrangian method.

Everything here is independent of the concrete problem: the functions only
see the current primal pair ``(x, z)``, the constraint image ``Mx``, the
subgradient certificate ``s = (s_x, s_z)`` emitted by an inner solver and the
outer state ``(p, w, c, epsilon)``.

The acceptance test comes in two flavours.  ``"fixed_unit"`` checks the
relative error criterion with the multiplier step fixed at ``rho = 1``;
``"adaptive"`` checks whether *some* relaxation factor satisfies it, and
:func:`relaxation_factor` then picks one from the admissible interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import ContractError, DimensionError

ADAPTIVE = "adaptive"
FIXED_UNIT = "fixed_unit"
MODES = (ADAPTIVE, FIXED_UNIT)

ACCEPT = "accept"
CONTINUE = "continue"

# absolute threshold below which U and S count as exactly zero
TOL_ZERO = 1e-14


@dataclass(frozen=True)
class Subgradient:
    """Subgradient of the augmented Lagrangian, split into x and z blocks."""

    s_x: np.ndarray
    s_z: np.ndarray

    def norm_sq(self) -> float:
        return float(self.s_x @ self.s_x + self.s_z @ self.s_z)


@dataclass(frozen=True)
class OuterState:
    """Multiplier ``p``, auxiliary ``w = (w_x, w_z)``, penalty ``c``."""

    p: np.ndarray
    w_x: np.ndarray
    w_z: np.ndarray
    c: float
    epsilon: float
    k: int = 0

    def __post_init__(self):
        if not self.c > 0:
            raise ContractError(f"penalty c must be positive, got {self.c}")
        if not 0 < self.epsilon < 1:
            raise ContractError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.w_z.shape != self.p.shape:
            raise DimensionError(
                f"w_z has shape {self.w_z.shape}, multiplier has {self.p.shape}"
            )

    @classmethod
    def zeros(cls, n: int, m: int, c: float, epsilon: float) -> "OuterState":
        return cls(np.zeros(m), np.zeros(n), np.zeros(m), float(c), float(epsilon))

    @property
    def w(self) -> np.ndarray:
        return np.concatenate([self.w_x, self.w_z])


@dataclass(frozen=True)
class SubproblemStats:
    U: float
    S: float
    A: float
    Delta: float


@dataclass(frozen=True)
class RelaxationDecision:
    gamma_min: float
    gamma: float
    rho: float
    mode: str


def discriminant(U: float, S: float, A: float, epsilon: float) -> float:
    return (U - A) ** 2 - epsilon * U * (U + S)


def compute_stats(x, z, Mx, s: Subgradient, state: OuterState) -> SubproblemStats:
    """U = ||Mx - z||^2, S = ||s||^2, A = (|<x - w_x, s_x>| + |<z - w_z, s_z>|) / c."""
    if x.shape != state.w_x.shape or x.shape != s.s_x.shape:
        raise DimensionError(
            f"x {x.shape}, w_x {state.w_x.shape} and s_x {s.s_x.shape} disagree"
        )
    if not (z.shape == Mx.shape == state.w_z.shape == s.s_z.shape):
        raise DimensionError(
            f"z {z.shape}, Mx {Mx.shape}, w_z {state.w_z.shape} and s_z "
            f"{s.s_z.shape} disagree"
        )
    u = z - Mx
    U = float(u @ u)
    S = s.norm_sq()
    A = (abs(float((x - state.w_x) @ s.s_x)) + abs(float((z - state.w_z) @ s.s_z))) / state.c
    return SubproblemStats(U, S, A, discriminant(U, S, A, state.epsilon))


def acceptance_test(stats: SubproblemStats, mode: str, inner_j: int = 1,
                    J1: int = 0, epsilon: float = 0.1) -> str:
    """Decide whether the current inner iterate may end the inner loop.

    ``epsilon`` is only consulted in ``fixed_unit`` mode; the adaptive test
    reads the discriminant already stored in ``stats``.  For the first ``J1``
    inner iterations the adaptive test additionally demands that a relaxation
    factor ``rho >= 1`` be admissible, i.e. ``Delta >= (A + S)^2``.
    """
    U, S, A, Delta = stats.U, stats.S, stats.A, stats.Delta
    if mode == ADAPTIVE:
        if not A < U:
            return CONTINUE
        bound = (A + S) ** 2 if inner_j <= J1 else 0.0
        return ACCEPT if Delta >= bound else CONTINUE
    if mode == FIXED_UNIT:
        return ACCEPT if 2.0 * A + S <= (1.0 - epsilon) * U else CONTINUE
    raise ContractError(f"unknown acceptance mode {mode!r}")


GammaRule = Callable[[float], float]


def gamma_max(gamma_min: float) -> float:
    return 1.0


def gamma_midpoint(gamma_min: float) -> float:
    return 0.5 * (gamma_min + 1.0)


def gamma_fixed(value: float) -> GammaRule:
    """Constant gamma; falls back to the midpoint when ``value`` is not admissible."""
    if not -1.0 <= value <= 1.0:
        raise ContractError(f"fixed gamma must lie in [-1, 1], got {value}")

    def rule(gamma_min: float) -> float:
        return value if value > gamma_min else gamma_midpoint(gamma_min)

    return rule


def make_gamma_rule(name: str, value: float | None = None) -> GammaRule:
    if name == "max":
        return gamma_max
    if name == "mid":
        return gamma_midpoint
    if name == "fixed":
        if value is None:
            raise ContractError("gamma rule 'fixed' needs a value")
        return gamma_fixed(value)
    raise ContractError(f"unknown gamma rule {name!r}")


# rounding slack tolerated (and clipped) at the ends of the admissible rho interval
RHO_ROUNDING = 1e-12


def relaxation_factor(stats: SubproblemStats, gamma_rule: GammaRule = gamma_max,
                      epsilon: float | None = None) -> RelaxationDecision:
    """Pick gamma in (gamma_min, 1] and return the matching relaxation factor.

    When ``epsilon`` is given, rho is clipped into ``rho_bounds(epsilon)``;
    only overshoots below ``RHO_ROUNDING`` are clipped, larger ones raise.
    """
    U, S, A, Delta = stats.U, stats.S, stats.A, stats.Delta
    if not (A < U and Delta >= 0):
        raise ContractError(
            f"relaxation factor requested for a rejected iterate (U={U}, A={A}, Delta={Delta})"
        )
    root = math.sqrt(Delta)
    gamma_min = max(-1.0, (A - U) / root) if root > 0 else -1.0
    gamma = gamma_rule(gamma_min)
    if not gamma_min < gamma <= 1.0:
        raise ContractError(f"gamma {gamma} outside ({gamma_min}, 1]")
    rho = (U - A + gamma * root) / (U + S)
    if epsilon is not None:
        lo, hi = rho_bounds(epsilon)
        if not lo - RHO_ROUNDING <= rho <= hi + RHO_ROUNDING:
            raise ContractError(f"rho {rho} outside [{lo}, {hi}] for epsilon={epsilon}")
        rho = min(max(rho, lo), hi)
    return RelaxationDecision(gamma_min, gamma, rho, ADAPTIVE)


def unit_decision() -> RelaxationDecision:
    return RelaxationDecision(-1.0, 1.0, 1.0, FIXED_UNIT)


def rho_bounds(epsilon: float) -> tuple[float, float]:
    r = math.sqrt(1.0 - epsilon)
    return 1.0 - r, 1.0 + r


def outer_update(state: OuterState, x, z, u, s: Subgradient, rho: float):
    """Apply the relaxed multiplier step.  Returns ``(new_state, p_bar)``.

    ``x`` and ``z`` are accepted for interface symmetry with the inner solvers
    but the update only needs ``u = z - Mx`` and ``s``.
    """
    if not rho > 0:
        raise ContractError(f"relaxation factor must be positive, got {rho}")
    if u.shape != state.p.shape or s.s_x.shape != state.w_x.shape or s.s_z.shape != state.w_z.shape:
        raise DimensionError("outer_update: u or s does not match the state")
    step = rho * state.c
    p_bar = state.p - state.c * u
    new = replace(
        state,
        p=state.p - step * u,
        w_x=state.w_x - step * s.s_x,
        w_z=state.w_z - step * s.s_z,
        k=state.k + 1,
    )
    return new, p_bar


def declare_exact_optimum(stats: SubproblemStats, tol_zero: float = TOL_ZERO) -> bool:
    return abs(stats.U) <= tol_zero and abs(stats.S) <= tol_zero
