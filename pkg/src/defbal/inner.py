"""Inner solvers for the augmented Lagrangian subproblem.

Both are proximal-gradient-class methods on the dual of the subproblem,
written in primal form as one x-minimization followed by one
z-minimization per step:

* ``adss_step`` -- plain alternating minimization (dual forward-backward with
  stepsize 1/c);
* ``fista_cd_step`` -- the Chambolle-Dossal FISTA variant, which minimizes x
  against an extrapolated point ``y`` instead of the last ``z``.

Each step returns a fresh :class:`InnerState` carrying the subgradient
``s = (s_x, 0)`` that certifies the iterate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import OuterState, Subgradient
from .errors import ConfigError
from .lasso import ProblemInstance, XSolverCache, solve_x_subproblem, solve_z_subproblem


@dataclass(frozen=True)
class InnerState:
    x: np.ndarray
    z: np.ndarray
    y: np.ndarray
    z_prev: np.ndarray
    t: float
    j: int
    s: Subgradient
    u: np.ndarray

    @property
    def Mx(self) -> np.ndarray:
        return self.x


def start_inner(z0, n: int) -> InnerState:
    """Warm start at ``z0`` with ``y = z0`` and ``t = 1``; ``j`` counts steps taken."""
    z0 = np.asarray(z0, dtype=float)
    zero_n = np.zeros(n)
    zero_m = np.zeros_like(z0)
    return InnerState(zero_n, z0, z0, z0, 1.0, 0, Subgradient(zero_n, zero_m), zero_m)


def _sweep(inst, cache, outer: OuterState, target):
    x = solve_x_subproblem(inst, cache, outer.p, outer.c, target)
    z = solve_z_subproblem(inst, outer.p, outer.c, x)
    return x, z


def adss_step(state: InnerState, outer: OuterState, inst: ProblemInstance,
              cache: XSolverCache) -> InnerState:
    x, z = _sweep(inst, cache, outer, state.z)
    s = Subgradient(outer.c * (state.z - z), np.zeros_like(z))
    return InnerState(x, z, z, state.z, 1.0, state.j + 1, s, z - x)


def fista_t(j: int, a: float) -> float:
    """Counter value t_j = (j + a - 1) / a; t_1 = 1."""
    return (j + a - 1.0) / a


def fista_cd_step(state: InnerState, outer: OuterState, inst: ProblemInstance,
                  cache: XSolverCache, a: float = 3.0, momentum: bool = True) -> InnerState:
    """One FISTA-CD step from extrapolation point ``state.y``.

    With step index ``j = state.j + 1`` the momentum coefficient is
    ``(t_j - 1) / t_{j+1} = (j - 1) / (j + a)``.  ``momentum=False`` zeroes it,
    which reduces the method to :func:`adss_step`.
    """
    if not a > 2:
        raise ConfigError(f"FISTA-CD needs a > 2, got {a}")
    j = state.j + 1
    t_j = fista_t(j, a)
    t_next = fista_t(j + 1, a)
    x, z = _sweep(inst, cache, outer, state.y)
    beta = (t_j - 1.0) / t_next if momentum else 0.0
    y = z + beta * (z - state.z)
    s = Subgradient(outer.c * (state.y - z), np.zeros_like(z))
    return InnerState(x, z, y, state.z, t_next, j, s, z - x)


def dual_gradient(inst: ProblemInstance, cache: XSolverCache, p, c: float, z):
    """Gradient of the smooth part of the dual subproblem at z: -(p + c(M xbar - z))."""
    xbar = solve_x_subproblem(inst, cache, p, c, z)
    return -(p + c * (xbar - z))
