import numpy as np
import pytest
from numpy.testing import assert_allclose

from helpers import fd_gradient, random_instance, random_manifold_point
from risbeam import (
    DegenerateRetractionError,
    LineSearchError,
    OptimizerConfig,
    analytic_max,
    armijo_step,
    euclidean_gradient,
    manifold_inner,
    objective,
    optimal_profile,
    polak_ribiere,
    random_profile,
    retract,
    rgd_optimize,
    riemannian_gradient,
    tangent_project,
)
from risbeam.manifold_opt import cost


def random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return m + m.conj().T


class TestEuclideanGradient:
    def test_identity_matrix(self):
        rng = np.random.default_rng(40)
        w = random_manifold_point(rng, 5)
        assert_allclose(euclidean_gradient(np.eye(5, dtype=complex), w), -2.0 * w, atol=1e-14)

    def test_single_element(self):
        r = np.array([[2.5 + 0j]])
        assert_allclose(euclidean_gradient(r, np.array([1.0 + 0j])), [-5.0], atol=1e-14)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(41)
        r = random_hermitian(rng, 6)
        w = random_manifold_point(rng, 6)
        fd = fd_gradient(r, w)
        got = euclidean_gradient(r, w)
        assert np.linalg.norm(got - fd) <= 1e-5 * np.linalg.norm(fd)


class TestTangentProject:
    def test_radial_projects_to_zero(self):
        rng = np.random.default_rng(42)
        w = random_manifold_point(rng, 7)
        assert np.max(np.abs(tangent_project(w, w))) <= 1e-14

    def test_tangent_unchanged(self):
        rng = np.random.default_rng(43)
        w = random_manifold_point(rng, 7)
        xi = 1j * w
        assert_allclose(tangent_project(w, xi), xi, atol=1e-14)

    def test_idempotent_and_tangent(self):
        rng = np.random.default_rng(44)
        w = random_manifold_point(rng, 9)
        xi = rng.normal(size=9) + 1j * rng.normal(size=9)
        once = tangent_project(w, xi)
        twice = tangent_project(w, once)
        assert_allclose(twice, once, atol=1e-13)
        assert np.max(np.abs(np.real(once * np.conj(w)))) <= 1e-12


class TestRiemannianGradient:
    def test_zero_matrix(self):
        rng = np.random.default_rng(45)
        w = random_manifold_point(rng, 4)
        assert np.max(np.abs(riemannian_gradient(np.zeros((4, 4), complex), w))) == 0.0

    def test_vanishes_at_analytic_optimum(self):
        rng = np.random.default_rng(46)
        for _ in range(10):
            inst = random_instance(rng, m_max=1)
            w_star = optimal_profile(inst["factor"])
            g = riemannian_gradient(inst["quadratic"], w_star)
            trace = float(np.real(np.trace(inst["quadratic"])))
            assert np.linalg.norm(g) <= 1e-9 * trace

    def test_matches_projected_finite_differences(self):
        rng = np.random.default_rng(47)
        for _ in range(20):
            n = int(rng.integers(2, 9))
            r = random_hermitian(rng, n)
            w = random_manifold_point(rng, n)
            fd = tangent_project(w, fd_gradient(r, w))
            got = riemannian_gradient(r, w)
            assert np.linalg.norm(got - fd) <= 1e-5 * max(np.linalg.norm(fd), 1e-9)


class TestRetract:
    def test_zero_vector_is_identity(self):
        rng = np.random.default_rng(48)
        w = random_manifold_point(rng, 6)
        assert_allclose(retract(w, np.zeros(6, complex)), w, atol=0.0)

    def test_quarter_turn(self):
        got = retract(np.array([1.0 + 0j]), np.array([1j]))
        assert_allclose(got, [(1 + 1j) / np.sqrt(2)], atol=1e-15)

    def test_result_on_manifold(self):
        rng = np.random.default_rng(49)
        w = random_manifold_point(rng, 8)
        v = tangent_project(w, rng.normal(size=8) + 1j * rng.normal(size=8))
        out = retract(w, v)
        assert np.max(np.abs(np.abs(out) - 1.0)) <= 1e-12

    def test_degenerate_entry_raises(self):
        with pytest.raises(DegenerateRetractionError):
            retract(np.array([1.0 + 0j]), np.array([-1.0 + 0j]))


class TestArmijoStep:
    def test_descent_direction_decreases_objective(self):
        rng = np.random.default_rng(50)
        inst = random_instance(rng, m_max=2)
        r = inst["quadratic"]
        w = random_manifold_point(rng, inst["geom"].n_elements)
        direction = -riemannian_gradient(r, w)
        alpha, m = armijo_step(r, w, direction)
        assert alpha > 0 and m >= 0
        w_new = retract(w, alpha * direction)
        assert cost(r, w_new) < cost(r, w)

    def test_zero_direction_accepts_initial_step(self):
        cfg = OptimizerConfig()
        r = np.eye(3, dtype=complex)
        w = np.ones(3, dtype=complex)
        alpha, m = armijo_step(r, w, np.zeros(3, complex), cfg)
        assert alpha == cfg.alpha_bar
        assert m == 0

    def test_small_sigma_accepts_any_improving_step(self):
        rng = np.random.default_rng(51)
        inst = random_instance(rng, m_max=1)
        r = inst["quadratic"]
        w = random_manifold_point(rng, inst["geom"].n_elements)
        direction = -riemannian_gradient(r, w)
        cfg = OptimizerConfig(sigma=1e-12)
        alpha, _ = armijo_step(r, w, direction, cfg)
        assert cost(r, retract(w, alpha * direction)) < cost(r, w)

    def test_backtrack_count_monotone_in_sigma(self):
        rng = np.random.default_rng(52)
        inst = random_instance(rng, m_max=1)
        r = inst["quadratic"]
        w = random_manifold_point(rng, inst["geom"].n_elements)
        direction = -riemannian_gradient(r, w)
        _, m_tight = armijo_step(r, w, direction, OptimizerConfig(sigma=0.9))
        _, m_loose = armijo_step(r, w, direction, OptimizerConfig(sigma=1e-9))
        assert m_loose <= m_tight

    def test_no_sufficient_decrease_raises(self):
        # At the global optimum no step along any tangent direction can
        # decrease f by the required margin.
        rng = np.random.default_rng(53)
        inst = random_instance(rng, m_max=1)
        r = inst["quadratic"]
        w_star = optimal_profile(inst["factor"])
        direction = 1j * w_star  # a tangent vector of norm sqrt(N)
        with pytest.raises(LineSearchError):
            armijo_step(r, w_star, direction, OptimizerConfig(max_backtracks=20))


class TestPolakRibiere:
    def test_identical_gradients_give_zero(self):
        rng = np.random.default_rng(54)
        w = random_manifold_point(rng, 6)
        g = tangent_project(w, rng.normal(size=6) + 1j * rng.normal(size=6))
        assert polak_ribiere(g, g, w) == pytest.approx(0.0, abs=1e-12)

    def test_vanishing_previous_gradient_restarts(self):
        rng = np.random.default_rng(55)
        w = random_manifold_point(rng, 6)
        g_next = tangent_project(w, rng.normal(size=6) + 1j * rng.normal(size=6))
        assert polak_ribiere(g_next, np.zeros(6, complex), w) == 0.0

    def test_matches_direct_formula(self):
        rng = np.random.default_rng(56)
        for _ in range(10):
            n = int(rng.integers(2, 10))
            w_prev = random_manifold_point(rng, n)
            w_next = random_manifold_point(rng, n)
            g_prev = tangent_project(w_prev, rng.normal(size=n) + 1j * rng.normal(size=n))
            g_next = tangent_project(w_next, rng.normal(size=n) + 1j * rng.normal(size=n))
            # Independent evaluation with explicit elementwise sums.
            transported = np.array(
                [
                    g_prev[i] - np.real(g_prev[i] * np.conj(w_next[i])) * w_next[i]
                    for i in range(n)
                ]
            )
            num = sum(
                np.real(np.conj(g_next[i]) * (g_next[i] - transported[i])) for i in range(n)
            )
            den = sum(np.real(np.conj(g_prev[i]) * g_prev[i]) for i in range(n))
            assert polak_ribiere(g_next, g_prev, w_next) == pytest.approx(num / den, rel=1e-12)


class TestRgdOptimize:
    def test_rank_one_reaches_analytic_maximum(self):
        rng = np.random.default_rng(57)
        for _ in range(10):
            inst = random_instance(rng, m_max=1)
            w, trace = rgd_optimize(inst["quadratic"])
            best = analytic_max(inst["factor"])
            assert objective(w, inst["quadratic"]) == pytest.approx(best, rel=1e-6)

    def test_scaled_identity_terminates_immediately(self):
        rng = np.random.default_rng(58)
        r = 2.2 * np.eye(7, dtype=complex)
        w0 = random_manifold_point(rng, 7)
        w, trace = rgd_optimize(r, w0)
        assert trace.iterations == 0
        assert trace.converged
        assert trace.grad_norm[0] <= OptimizerConfig().epsilon
        assert_allclose(w, w0, atol=0.0)

    def test_seeded_at_optimum_stops_within_one_iteration(self):
        rng = np.random.default_rng(59)
        inst = random_instance(rng, m_max=1)
        w_star = optimal_profile(inst["factor"])
        w, trace = rgd_optimize(inst["quadratic"], w_star)
        assert trace.iterations <= 1

    def test_dominates_random_sampling(self):
        rng = np.random.default_rng(60)
        inst = random_instance(rng, n_rows=(2, 3), n_cols=(4, 5), m_max=2)
        n = inst["geom"].n_elements
        assert n == 8
        w, _ = rgd_optimize(inst["quadratic"])
        achieved = objective(w, inst["quadratic"])
        sampled = max(
            objective(random_manifold_point(rng, n), inst["quadratic"]) for _ in range(10_000)
        )
        assert achieved >= sampled

    def test_trace_invariants(self):
        rng = np.random.default_rng(61)
        for _ in range(5):
            inst = random_instance(rng, m_max=3)
            w, trace = rgd_optimize(inst["quadratic"])
            for iterate in trace.iterates:
                assert np.max(np.abs(1.0 - np.abs(iterate))) <= 1e-12
            for k, direction in enumerate(trace.search_directions):
                residue = np.max(np.abs(np.real(direction * np.conj(trace.iterates[k]))))
                assert residue <= 1e-10
            diffs = np.diff(trace.objective)
            assert np.all(diffs <= 0.0)

    def test_global_phase_invariance(self):
        rng = np.random.default_rng(62)
        inst = random_instance(rng, m_max=2)
        n = inst["geom"].n_elements
        w_a, _ = rgd_optimize(inst["quadratic"], np.ones(n, complex))
        w_b, _ = rgd_optimize(inst["quadratic"], np.exp(0.731j) * np.ones(n, complex))
        fa = objective(w_a, inst["quadratic"])
        fb = objective(w_b, inst["quadratic"])
        assert fb == pytest.approx(fa, rel=1e-9)

    def test_rejects_off_manifold_start(self):
        r = np.eye(3, dtype=complex)
        with pytest.raises(ValueError):
            rgd_optimize(r, np.array([2.0, 1.0, 1.0], dtype=complex))

    def test_random_profile_is_seeded_and_on_manifold(self):
        w1 = random_profile(16, np.random.default_rng(5))
        w2 = random_profile(16, np.random.default_rng(5))
        assert np.array_equal(w1, w2)
        assert np.max(np.abs(np.abs(w1) - 1.0)) <= 1e-12

    def test_center_element_saddle_is_escaped(self):
        # Odd x odd boards started from all-ones park the center element
        # exactly anti-phase without the sign-flip safeguard.
        rng = np.random.default_rng(7)
        from helpers import CARRIER

        from risbeam import (
            PlaneWaveSource,
            build_quadratic_form,
            build_upa,
            incidence_matrix,
            rank_one_factor,
            source_amplitudes,
            steering_vector,
        )
        from risbeam.geometry import Direction

        geom = build_upa(3, 3, 0.025)
        src = PlaneWaveSource(Direction(41.0, 13.0), 1.0 + 0.6j)
        dep = Direction(57.0, -122.0)
        a = steering_vector(geom, dep, CARRIER)
        b = incidence_matrix(geom, [src], CARRIER)
        x = source_amplitudes([src])
        r = build_quadratic_form(a, b, x)
        v = rank_one_factor(a, b, x)
        w, trace = rgd_optimize(r)
        assert objective(w, r) == pytest.approx(analytic_max(v), rel=1e-6)

    def test_trace_summary_fields(self):
        rng = np.random.default_rng(63)
        inst = random_instance(rng, m_max=1)
        _, trace = rgd_optimize(inst["quadratic"])
        summary = trace.summary()
        assert summary["iterations"] == trace.iterations
        assert summary["final_objective"] == trace.objective[-1]
        assert "stop_reason" in summary


class TestOptimizerConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"epsilon": 0.0},
            {"alpha_bar": -1.0},
            {"sigma": 1.0},
            {"beta": 0.0},
            {"max_iters": 0},
            {"max_backtracks": 0},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            OptimizerConfig(**kwargs)

    def test_defaults_follow_published_settings(self):
        cfg = OptimizerConfig()
        assert cfg.epsilon == 1e-10
        assert cfg.alpha_bar == 1.0
        assert cfg.sigma == 0.4
        assert cfg.beta == 0.5


def test_manifold_inner_is_real_euclidean():
    rng = np.random.default_rng(64)
    x = rng.normal(size=5) + 1j * rng.normal(size=5)
    y = rng.normal(size=5) + 1j * rng.normal(size=5)
    expected = float(np.real(np.sum(np.conj(x) * y)))
    assert manifold_inner(x, y) == pytest.approx(expected, rel=1e-14)
