"""Slow, trusted LASSO solver used as ground truth in tests and acceptance.

Plain proximal gradient (ISTA) with stepsize 1/L, L the top eigenvalue of
A^T A estimated by power iteration.  Nothing here calls into the ALM code
path; only numpy kernels are shared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, OracleError


@dataclass(frozen=True)
class ReferenceSolution:
    x_star: np.ndarray
    z_star: np.ndarray
    p_star: np.ndarray
    residual: float
    objective: float
    iterations: int


def lipschitz_constant(A, iters: int = 500, seed: int = 0) -> float:
    """Largest eigenvalue of A^T A by power iteration, padded by 1e-9 relative."""
    v = np.random.default_rng(seed).standard_normal(A.shape[1])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = A.T @ (A @ v)
        lam_new = float(np.linalg.norm(w))
        if lam_new == 0:
            return 0.0
        v = w / lam_new
        if abs(lam_new - lam) <= 1e-13 * lam_new:
            lam = lam_new
            break
        lam = lam_new
    return lam * (1 + 1e-9)


def _residual(q, x, nu):
    r = np.where(x != 0, np.abs(q + nu * np.sign(x)), np.maximum(0.0, np.abs(q) - nu))
    return float(r.max()) if r.size else 0.0


def solve_reference(inst, tol: float = 1e-10, max_iter: int = 10_000_000,
                    x0=None) -> ReferenceSolution:
    if not tol > 0:
        raise ContractError(f"tolerance must be positive, got {tol}")
    A, b, nu = inst.A, inst.b, inst.nu
    L = lipschitz_constant(A)
    if L == 0:
        raise OracleError("A is zero")
    step = 1.0 / L
    x = np.zeros(A.shape[1]) if x0 is None else np.array(x0, dtype=float)
    AtA = A.T @ A if A.shape[0] >= A.shape[1] else None
    Atb = A.T @ b
    for it in range(max_iter):
        q = AtA @ x - Atb if AtA is not None else A.T @ (A @ x - b)
        # the ISTA output is exactly sparse, so the exact-zero test is safe
        if it % 10 == 0 and _residual(q, x, nu) <= tol:
            break
        v = x - step * q
        x = np.sign(v) * np.maximum(np.abs(v) - step * nu, 0.0)
    else:
        raise OracleError(f"reference solver did not reach tol={tol} in {max_iter} iterations")
    r = A @ x - b
    p_star = -(A.T @ r)
    return ReferenceSolution(
        x_star=x,
        z_star=x.copy(),
        p_star=p_star,
        residual=_residual(A.T @ r, x, nu),
        objective=0.5 * float(r @ r) + nu * float(np.abs(x).sum()),
        iterations=it,
    )
