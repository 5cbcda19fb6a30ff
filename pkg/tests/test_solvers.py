import math

import numpy as np
import pytest

from defbal.core import rho_bounds
from defbal.errors import ConfigError
from defbal.lasso import ProblemInstance, objective
from defbal.reference import solve_reference
from defbal.solvers import (ADMM, ALGORITHMS, ALM_AR_ADSS, ALM_AR_FISTA_CD, ALM_FISTA_CD,
                            ALM_VARIANTS, CONVERGED, MAX_INNER, MAX_OUTER, AlgorithmConfig, run,
                            run_admm, run_alm)

from .conftest import random_instance


@pytest.mark.parametrize("alg", ALGORITHMS)
def test_scalar_closed_form(scalar_instance, alg):
    rec = run(scalar_instance, AlgorithmConfig(alg, c=1.0))
    assert rec.converged
    assert abs(rec.x[0] - 0.9) <= 1e-6
    assert abs(rec.z[0] - 0.9) <= 1e-6


@pytest.mark.parametrize("alg", ALGORITHMS)
def test_large_nu_gives_zero(rng, alg):
    inst = random_instance(rng, 10, 5)
    big = ProblemInstance(inst.A, inst.b, 1.5 * float(np.max(np.abs(inst.A.T @ inst.b))))
    rec = run(big, AlgorithmConfig(alg, c=1.0))
    assert rec.converged and rec.outer_iterations <= 5
    assert np.max(np.abs(rec.z)) <= 1e-6


@pytest.mark.parametrize("alg", ALGORITHMS)
@pytest.mark.parametrize("shape", [(30, 8), (8, 30)])
def test_matches_reference(rng, alg, shape):
    inst = random_instance(rng, *shape)
    ref = solve_reference(inst, tol=1e-11)
    rec = run(inst, AlgorithmConfig(alg, c=1.0, J1=2 if alg in (ALM_AR_ADSS, ALM_AR_FISTA_CD) else 0,
                                    Jr=5 if alg != ADMM else None))
    assert rec.status == CONVERGED
    assert rec.final_residual <= 1e-6
    assert abs(rec.final_objective - ref.objective) <= 1e-8 * abs(ref.objective)
    assert ref.objective <= rec.final_objective + 1e-8


def test_admm_agrees_with_fista(rng):
    inst = random_instance(rng, 20, 12)
    a = run(inst, AlgorithmConfig(ADMM, c=1.0))
    f = run(inst, AlgorithmConfig(ALM_FISTA_CD, c=1.0))
    assert abs(a.final_objective - f.final_objective) <= 1e-8 * abs(f.final_objective)


def test_admm_from_saddle_point(small_tall):
    inst = small_tall
    ref = solve_reference(inst, tol=1e-12)
    rec = run_admm(inst, AlgorithmConfig(ADMM, c=1.0, residual_at="x"), p0=ref.p_star, z0=ref.z_star)
    assert rec.status == CONVERGED and rec.outer_iterations == 1
    np.testing.assert_allclose(rec.p, ref.p_star, atol=1e-10)
    np.testing.assert_allclose(rec.z, ref.z_star, atol=1e-10)


def test_admm_outer_equals_inner(small_wide):
    rec = run(small_wide, AlgorithmConfig(ADMM, c=1.0))
    assert rec.outer_iterations == rec.inner_iterations_cumulative > 1


@pytest.mark.parametrize("alg", ALM_VARIANTS)
def test_rho_trace(small_wide, alg):
    cfg = AlgorithmConfig(alg, c=1.0)
    rec = run(small_wide, cfg)
    assert len(rec.rho_trace) == rec.outer_iterations
    if cfg.adaptive:
        lo, hi = rho_bounds(cfg.epsilon)
        assert all(lo - 1e-12 <= r <= hi + 1e-12 for r in rec.rho_trace)
    else:
        assert all(r == 1.0 for r in rec.rho_trace)


@pytest.mark.parametrize("alg", ALGORITHMS)
def test_determinism(small_wide, alg):
    cfg = AlgorithmConfig(alg, c=0.5, Jr=3 if alg != ADMM else None)
    r1, r2 = run(small_wide, cfg), run(small_wide, cfg)
    assert r1.outer_iterations == r2.outer_iterations
    assert r1.inner_iterations_cumulative == r2.inner_iterations_cumulative
    assert r1.rho_trace == r2.rho_trace and r1.residual_trace == r2.residual_trace
    np.testing.assert_array_equal(r1.x, r2.x)


@pytest.mark.parametrize("alg", ALM_VARIANTS)
def test_w_z_stays_zero_without_reset(small_tall, alg):
    seen = []
    rec = run_alm(small_tall, AlgorithmConfig(alg, c=1.0),
                  monitor=lambda step: seen.append(np.max(np.abs(step.state.w_z))))
    assert rec.converged and seen and max(seen) == 0.0


def test_heuristics_are_additive(small_wide):
    # J1 = 0 with no reset runs the plain method; enabling J1 only changes acceptance early on
    plain = run(small_wide, AlgorithmConfig(ALM_AR_FISTA_CD, c=1.0))
    resets = []
    run_alm(small_wide, AlgorithmConfig(ALM_AR_FISTA_CD, c=1.0),
            monitor=lambda s: resets.append(s.reset))
    assert not any(resets)
    strong = run(small_wide, AlgorithmConfig(ALM_AR_FISTA_CD, c=1.0, J1=10**6))
    assert all(r >= 1 - 1e-12 for r in strong.rho_trace)
    assert plain.converged and strong.converged


def test_reset_fires_when_inner_loop_is_long(small_wide):
    flags = []
    run_alm(small_wide, AlgorithmConfig(ALM_FISTA_CD, c=1.0, Jr=1),
            monitor=lambda s: flags.append((s.reset, s.inner.j, s.state.w_x is s.inner.x)))
    assert any(f[0] for f in flags)
    assert all(f[0] == (f[1] > 1) for f in flags)


def test_near_exact_subproblem_rho_limit(small_tall):
    rec = run_alm(small_tall, AlgorithmConfig(ALM_AR_FISTA_CD, c=1.0, max_outer=3),
                  accept_rule=lambda it, st: math.sqrt(st.S) <= 1e-12)
    hi = 1 + math.sqrt(0.9)
    assert all(abs(r - hi) <= 1e-6 for r in rec.rho_trace)


def test_caps_recorded_not_raised(small_wide):
    rec = run(small_wide, AlgorithmConfig(ALM_FISTA_CD, c=1.0, max_outer=2))
    assert rec.status == MAX_OUTER and rec.outer_iterations == 2
    rec = run(small_wide, AlgorithmConfig(ALM_AR_ADSS, c=1.0, max_inner=1, J1=100))
    assert rec.status == MAX_INNER


def test_config_validation():
    for bad in (dict(algorithm="nope", c=1), dict(algorithm=ADMM, c=0),
                dict(algorithm=ADMM, c=1, epsilon=1.0), dict(algorithm=ADMM, c=1, a=2),
                dict(algorithm=ADMM, c=1, Jr=0), dict(algorithm=ADMM, c=1, J1=-1),
                dict(algorithm=ADMM, c=1, gamma_rule="fixed"),
                dict(algorithm=ADMM, c=1, residual_at="w")):
        with pytest.raises((ConfigError, ValueError)):
            AlgorithmConfig(**bad)
    with pytest.raises(ConfigError):
        run_alm(ProblemInstance(np.eye(1), np.ones(1), 0.1), AlgorithmConfig(ADMM, c=1))


def test_residual_at_x_also_converges(small_tall):
    ref = solve_reference(small_tall, tol=1e-11)
    rec = run(small_tall, AlgorithmConfig(ALM_FISTA_CD, c=1.0, residual_at="x", tol_zero=0.0))
    assert rec.status == CONVERGED
    assert abs(rec.final_objective - ref.objective) <= 1e-8 * ref.objective
