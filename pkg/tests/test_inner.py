import numpy as np
import pytest

from defbal.core import OuterState
from defbal.errors import ConfigError
from defbal.inner import adss_step, dual_gradient, fista_cd_step, fista_t, start_inner
from defbal.lasso import (ProblemInstance, XSolverCache, augmented_lagrangian, soft_threshold,
                          solve_x_subproblem)
from defbal.reference import solve_reference

from .conftest import random_instance
from .oracles import central_gradient, grid_argmin_1d, partial_min_value

EPS = 0.1


def frozen(inst, p, c):
    return OuterState(np.asarray(p, dtype=float), np.zeros(inst.n), np.zeros(inst.m), c, EPS)


def test_adss_scalar(scalar_instance):
    inst = scalar_instance
    outer = frozen(inst, [0.0], 1.0)
    it = adss_step(start_inner(np.zeros(1), 1), outer, inst, XSolverCache(inst, 1.0))
    assert it.x[0] == pytest.approx(0.5)
    assert it.z[0] == pytest.approx(0.4)
    # the same two minimizations by grid search
    xg = grid_argmin_1d(lambda x: 0.5 * (x - 1) ** 2 + 0.5 * x**2)
    zg = grid_argmin_1d(lambda z: 0.1 * np.abs(z) + 0.5 * (0.5 - z) ** 2)
    assert xg == pytest.approx(0.5, abs=1e-4) and zg == pytest.approx(0.4, abs=1e-4)
    np.testing.assert_allclose(it.s.s_x, [1.0 * (0.0 - 0.4)])
    np.testing.assert_array_equal(it.u, it.z - it.x)
    assert it.j == 1


def test_adss_fixed_point_at_saddle(small_tall):
    inst = small_tall
    ref = solve_reference(inst, tol=1e-12)
    c = 1.3
    it = adss_step(start_inner(ref.z_star, inst.n), frozen(inst, ref.p_star, c), inst,
                   XSolverCache(inst, c))
    np.testing.assert_allclose(it.z, ref.z_star, atol=1e-10)
    assert np.linalg.norm(it.s.s_x) <= 1e-9
    assert np.linalg.norm(it.u) <= 1e-10


@pytest.mark.parametrize("shape", [(30, 8), (8, 30)])
def test_adss_is_dual_prox_gradient(rng, shape):
    inst = random_instance(rng, *shape)
    worst = 0.0
    for _ in range(100):
        c = float(rng.uniform(0.1, 5))
        cache = XSolverCache(inst, c)
        p = rng.uniform(-inst.nu, inst.nu, inst.n)
        z = rng.standard_normal(inst.n)
        it = adss_step(start_inner(z, inst.n), frozen(inst, p, c), inst, cache)
        v = z - dual_gradient(inst, cache, p, c, z) / c
        expected = soft_threshold(v, inst.nu / c)
        worst = max(worst, float(np.max(np.abs(it.z - expected))))
    assert worst <= 1e-9


def test_fista_first_step_equals_adss(small_wide, rng):
    inst = small_wide
    c = 2.0
    cache = XSolverCache(inst, c)
    outer = frozen(inst, rng.uniform(-inst.nu, inst.nu, inst.n), c)
    z0 = rng.standard_normal(inst.n)
    a = adss_step(start_inner(z0, inst.n), outer, inst, cache)
    f = fista_cd_step(start_inner(z0, inst.n), outer, inst, cache)
    np.testing.assert_array_equal(a.z, f.z)
    np.testing.assert_array_equal(f.y, f.z)
    np.testing.assert_array_equal(a.s.s_x, f.s.s_x)


def test_fista_momentum_coefficient(small_tall, rng):
    inst = small_tall
    c, a = 1.0, 3.0
    cache = XSolverCache(inst, c)
    outer = frozen(inst, np.zeros(inst.n), c)
    it = start_inner(rng.standard_normal(inst.n), inst.n)
    for j in range(1, 12):
        nxt = fista_cd_step(it, outer, inst, cache, a)
        beta = (j - 1) / (j + a)
        np.testing.assert_allclose(nxt.y, nxt.z + beta * (nxt.z - it.z), rtol=0, atol=1e-14)
        np.testing.assert_allclose(nxt.s.s_x, c * (it.y - nxt.z), rtol=0, atol=1e-14)
        np.testing.assert_array_equal(nxt.u, nxt.z - nxt.x)
        assert nxt.j == j
        it = nxt


def test_fista_t_sequence():
    np.testing.assert_allclose([fista_t(j, 3.0) for j in range(1, 5)], [1, 4 / 3, 5 / 3, 2])
    for a in (2.5, 3.0, 4.0, 10.0):
        for j in range(1, 2000):
            t, t1 = fista_t(j, a), fista_t(j + 1, a)
            assert t1**2 - t1 <= t**2 + 1e-12


def test_fista_rejects_small_a(small_tall):
    inst = small_tall
    with pytest.raises(ConfigError):
        fista_cd_step(start_inner(np.zeros(inst.n), inst.n), frozen(inst, np.zeros(inst.n), 1.0),
                      inst, XSolverCache(inst, 1.0), a=2.0)


def test_fista_without_momentum_is_adss(small_wide, rng):
    inst = small_wide
    c = 0.8
    cache = XSolverCache(inst, c)
    outer = frozen(inst, rng.uniform(-inst.nu, inst.nu, inst.n), c)
    z0 = rng.standard_normal(inst.n)
    a = f = start_inner(z0, inst.n)
    for _ in range(40):
        a = adss_step(a, outer, inst, cache)
        f = fista_cd_step(f, outer, inst, cache, momentum=False)
        np.testing.assert_array_equal(a.z, f.z)
        np.testing.assert_array_equal(a.x, f.x)
        np.testing.assert_array_equal(a.s.s_x, f.s.s_x)


def test_dual_gradient_at_consistent_point(rng):
    # A = I, b chosen so that xbar reproduces z exactly: A^T b - p + cz = (1 + c) z
    z = rng.standard_normal(4)
    p = rng.standard_normal(4)
    inst = ProblemInstance(np.eye(4), z + p, 0.1)
    cache = XSolverCache(inst, 1.7)
    np.testing.assert_allclose(dual_gradient(inst, cache, p, 1.7, z), -p, atol=1e-13)


def test_dual_gradient_finite_differences(rng):
    for _ in range(20):
        inst = random_instance(rng, int(rng.integers(3, 9)), 5)
        c = float(rng.uniform(0.3, 3))
        cache = XSolverCache(inst, c)
        p = rng.standard_normal(5) * 0.3
        z = rng.standard_normal(5)
        fun = lambda v: partial_min_value(inst.A, inst.b, p, c, v) - p @ v
        g = dual_gradient(inst, cache, p, c, z)
        assert np.max(np.abs(g - central_gradient(fun, z))) <= 1e-5


def test_dual_gradient_lipschitz(rng):
    inst = random_instance(rng, 12, 7)
    for _ in range(1000):
        c = float(rng.uniform(0.01, 10))
        cache = XSolverCache(inst, c)
        p = rng.standard_normal(7)
        z1, z2 = rng.standard_normal(7), rng.standard_normal(7)
        lhs = np.linalg.norm(dual_gradient(inst, cache, p, c, z1) - dual_gradient(inst, cache, p, c, z2))
        assert lhs <= c * np.linalg.norm(z1 - z2) * (1 + 1e-12)


def test_adss_augmented_lagrangian_descent(rng):
    for shape in ((30, 8), (8, 30)):
        inst = random_instance(rng, *shape)
        c = 1.0
        cache = XSolverCache(inst, c)
        p = rng.uniform(-inst.nu, inst.nu, inst.n)
        it = adss_step(start_inner(rng.standard_normal(inst.n), inst.n), frozen(inst, p, c), inst, cache)
        prev = augmented_lagrangian(inst, it.x, it.z, p, c)
        for _ in range(200):
            it = adss_step(it, frozen(inst, p, c), inst, cache)
            cur = augmented_lagrangian(inst, it.x, it.z, p, c)
            assert cur <= prev + 1e-12 * (1 + abs(prev))
            prev = cur


@pytest.mark.parametrize("step", ["adss", "fista"])
def test_compatible_process(rng, step):
    for _ in range(5):
        inst = random_instance(rng, 25, 6)
        c = 1.0
        cache = XSolverCache(inst, c)
        p = rng.uniform(-inst.nu, inst.nu, inst.n)
        outer = frozen(inst, p, c)
        it = start_inner(np.zeros(inst.n), inst.n)
        for _ in range(500):
            it = adss_step(it, outer, inst, cache) if step == "adss" else fista_cd_step(it, outer, inst, cache)
        assert np.linalg.norm(it.s.s_x) < 1e-8
        assert abs(it.x @ it.s.s_x) < 1e-8
