"""Inexact augmented Lagrangian methods with adaptive relaxation for LASSO.

Four ALM variants (alternating-minimization or FISTA-CD inner loop, fixed or
adaptive multiplier relaxation) and classical ADMM, plus a slow reference
solver and a benchmark harness.
"""

from .core import (OuterState, RelaxationDecision, Subgradient, SubproblemStats, acceptance_test,
                   compute_stats, declare_exact_optimum, outer_update, relaxation_factor)
from .lasso import (ProblemInstance, XSolverCache, kkt_residual_inf, make_instance, objective,
                    regularization_weight, scale_instance, soft_threshold)
from .reference import ReferenceSolution, solve_reference
from .solvers import ALGORITHMS, AlgorithmConfig, RunRecord, run, run_admm, run_alm

__version__ = "0.1.0"
