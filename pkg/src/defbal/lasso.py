"""LASSO in Fenchel-Rockafellar form: f(x) = 0.5||Ax - b||^2, g = nu||.||_1, M = I.

The x-subproblem is a ridge-type linear system solved with a cached Cholesky
factor; the z-subproblem is soft thresholding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import ContractError, DimensionError, InstanceError

# |x_i| at or below this counts as zero in the KKT residual
ZERO_ENTRY = 1e-12


@dataclass(frozen=True)
class ProblemInstance:
    A: np.ndarray
    b: np.ndarray
    nu: float
    name: str = ""

    def __post_init__(self):
        if self.A.ndim != 2 or self.b.shape != (self.A.shape[0],):
            raise DimensionError(f"A {self.A.shape} and b {self.b.shape} disagree")
        if not self.nu > 0:
            raise InstanceError(f"regularization weight must be positive, got {self.nu}")

    @property
    def obs(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def m(self) -> int:
        # M = I, so the constraint space is the feature space
        return self.A.shape[1]


def scale_instance(A_raw, b_raw):
    """Divide every column of ``A_raw`` and ``b_raw`` by their l2 norms."""
    A = np.array(A_raw, dtype=float)
    b = np.array(b_raw, dtype=float).reshape(-1)
    if A.ndim != 2 or A.size == 0:
        raise InstanceError("matrix must be two-dimensional and nonempty")
    if b.shape[0] != A.shape[0]:
        raise DimensionError(f"b has {b.shape[0]} entries, A has {A.shape[0]} rows")
    norms = np.linalg.norm(A, axis=0)
    zero = np.flatnonzero(norms == 0)
    if zero.size:
        raise InstanceError(f"column {int(zero[0])} of A is identically zero")
    bnorm = np.linalg.norm(b)
    if bnorm == 0:
        raise InstanceError("target vector b is identically zero")
    return A / norms, b / bnorm


def regularization_weight(A, b) -> float:
    """nu = 0.1 * ||A^T b||_inf."""
    nu = 0.1 * float(np.max(np.abs(A.T @ b)))
    if nu == 0:
        raise InstanceError("A^T b vanishes; the regularization weight would be zero")
    return nu


def make_instance(A_raw, b_raw, name: str = "") -> ProblemInstance:
    A, b = scale_instance(A_raw, b_raw)
    return ProblemInstance(A, b, regularization_weight(A, b), name)


def soft_threshold(v, tau):
    return np.sign(v) * np.maximum(np.abs(v) - tau, 0.0)


class XSolverCache:
    """Cholesky factor of A^T A + cI, or of A A^T + cI when A is wide.

    The wide variant recovers the n-dimensional solution through the
    matrix inversion lemma:
        (A^T A + cI)^{-1} r = (r - A^T (A A^T + cI)^{-1} A r) / c.
    """

    def __init__(self, inst: ProblemInstance, c: float):
        if not c > 0:
            raise ContractError(f"penalty c must be positive, got {c}")
        self.c = float(c)
        self.A = inst.A
        self.Atb = inst.A.T @ inst.b
        obs, n = inst.A.shape
        self.side = "gram_rows" if obs < n else "gram_cols"
        if self.side == "gram_rows":
            K = inst.A @ inst.A.T
        else:
            K = inst.A.T @ inst.A
        K[np.diag_indices_from(K)] += self.c
        self.factor = cho_factor(K, lower=True, check_finite=False)

    def solve(self, rhs):
        if self.side == "gram_cols":
            return cho_solve(self.factor, rhs, check_finite=False)
        Ar = self.A @ rhs
        return (rhs - self.A.T @ cho_solve(self.factor, Ar, check_finite=False)) / self.c


def x_rhs(cache: XSolverCache, p, c, target):
    return cache.Atb - p + c * target


def solve_x_subproblem(inst: ProblemInstance, cache: XSolverCache, p, c: float, target):
    """argmin_x 0.5||Ax - b||^2 + <p, x> + (c/2)||x - target||^2."""
    if c != cache.c:
        raise ContractError(f"cache was built for c={cache.c}, called with c={c}")
    if p.shape != (inst.n,) or target.shape != (inst.n,):
        raise DimensionError(f"p {p.shape} / target {target.shape} vs n={inst.n}")
    return cache.solve(x_rhs(cache, p, c, target))


def solve_z_subproblem(inst: ProblemInstance, p, c: float, Mx):
    """argmin_z nu||z||_1 - <p, z> + (c/2)||Mx - z||^2."""
    if not c > 0:
        raise ContractError(f"penalty c must be positive, got {c}")
    if p.shape != Mx.shape:
        raise DimensionError(f"p {p.shape} and Mx {Mx.shape} disagree")
    return soft_threshold(Mx + p / c, inst.nu / c)


def kkt_residual_inf(inst: ProblemInstance, x) -> float:
    """l_inf distance from 0 to the subdifferential of the LASSO objective at x."""
    q = inst.A.T @ (inst.A @ x - inst.b)
    nz = np.abs(x) > ZERO_ENTRY
    r = np.where(nz, np.abs(q + inst.nu * np.sign(x)), np.maximum(0.0, np.abs(q) - inst.nu))
    return float(np.max(r)) if r.size else 0.0


def objective(inst: ProblemInstance, x) -> float:
    r = inst.A @ x - inst.b
    return 0.5 * float(r @ r) + inst.nu * float(np.sum(np.abs(x)))


def augmented_lagrangian(inst: ProblemInstance, x, z, p, c: float) -> float:
    """f(x) + g(z) + <p, x - z> + (c/2)||x - z||^2."""
    r = inst.A @ x - inst.b
    d = x - z
    return (0.5 * float(r @ r) + inst.nu * float(np.sum(np.abs(z)))
            + float(p @ d) + 0.5 * c * float(d @ d))
