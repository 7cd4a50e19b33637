"""사영, 사영 Adam, 경사 하강/흐름 테스트"""

import numpy as np
import pytest

from phase_probe.landscape.instance import generate_instance, random_unit_vector
from phase_probe.landscape.models import Instance
from phase_probe.landscape.population import pop_onepoint_ratio
from phase_probe.optimize.adam import projected_adam
from phase_probe.optimize.descent import (
    FlowField,
    FlowMethod,
    contraction_slope,
    gradient_descent,
    gradient_flow,
)
from phase_probe.optimize.models import AdamConfig, parse_schedule
from phase_probe.optimize.projection import (
    AnnulusAround,
    BallAround,
    ProductProjection,
    SphereAround,
    UnitSphere,
)
from phase_probe.utils.exceptions import (
    ConfigError,
    DegenerateDirectionError,
    DivergenceError,
    OptimizerAbortError,
    ParameterError,
)


class TestProjections:
    def test_unit_sphere(self, rng: np.random.Generator):
        proj = UnitSphere()
        v = proj(3.0 * rng.standard_normal(5))
        assert proj.contains(v)
        assert np.allclose(proj(v), v, atol=1e-15)

    def test_unit_sphere_rejects_zero(self):
        with pytest.raises(DegenerateDirectionError):
            UnitSphere()(np.zeros(3))

    def test_ball_leaves_interior_points(self):
        center = np.zeros(3)
        proj = BallAround(center, 1.0)
        inside = np.array([0.2, 0.1, 0.0])
        assert np.array_equal(proj(inside), inside)
        outside = proj(np.array([3.0, 4.0, 0.0]))
        assert np.allclose(outside, [0.6, 0.8, 0.0])

    def test_sphere_around(self):
        proj = SphereAround(np.ones(2), 0.5)
        v = proj(np.array([1.1, 1.0]))
        assert np.allclose(v, [1.5, 1.0])
        assert proj.contains(v)

    def test_annulus_pushes_both_ways(self):
        proj = AnnulusAround(np.zeros(2), 0.1, 0.3)
        assert np.allclose(proj(np.array([0.01, 0.0])), [0.1, 0.0])
        assert np.allclose(proj(np.array([1.0, 0.0])), [0.3, 0.0])
        assert np.allclose(proj(np.array([0.2, 0.0])), [0.2, 0.0])

    @pytest.mark.parametrize(("r_lo", "r_hi"), [(0.0, 0.3), (0.4, 0.3)])
    def test_annulus_rejects_bad_radii(self, r_lo: float, r_hi: float):
        with pytest.raises(ParameterError):
            AnnulusAround(np.zeros(2), r_lo, r_hi)

    def test_ball_rejects_non_positive_radius(self):
        with pytest.raises(ParameterError):
            BallAround(np.zeros(2), 0.0)

    def test_product_is_idempotent(self, rng: np.random.Generator):
        proj = ProductProjection([(UnitSphere(), 3), (BallAround(np.zeros(2), 0.5), 2)])
        once = proj(rng.standard_normal(5) * 4)
        assert np.allclose(proj(once), once, atol=1e-15)
        assert proj.contains(once)
        u, w = proj.split(once)
        assert u.shape == (3,) and w.shape == (2,)

    def test_product_rejects_wrong_length(self):
        proj = ProductProjection([(UnitSphere(), 3)])
        with pytest.raises(ParameterError):
            proj.split(np.ones(4))

    @pytest.mark.parametrize(
        "proj",
        [
            UnitSphere(),
            BallAround(np.full(4, 0.5), 0.7),
            SphereAround(np.full(4, -0.2), 0.3),
            AnnulusAround(np.zeros(4), 0.2, 0.9),
            ProductProjection([(UnitSphere(), 2), (AnnulusAround(np.ones(2), 0.1, 0.4), 2)]),
        ],
        ids=["unit_sphere", "ball", "sphere", "annulus", "product"],
    )
    def test_idempotent_on_many_inputs(self, rng: np.random.Generator, proj):
        scales = rng.uniform(0.01, 3.0, size=1000)
        for scale in scales:
            once = proj(scale * rng.standard_normal(4))
            assert proj.contains(once)
            assert np.allclose(proj(once), once, rtol=0.0, atol=1e-12)


class TestAdamConfig:
    def test_presets(self):
        fig2 = AdamConfig.preset("fig2")
        assert fig2.total_steps == 1000
        rates = fig2.learning_rates()
        assert rates[0] == 0.001 and rates[200] == 0.0005 and rates[-1] == 0.0003
        assert AdamConfig.preset("fig3").total_steps == 3000

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            AdamConfig.preset("fig9")

    def test_accepts_pairs(self):
        cfg = AdamConfig(schedule=[(10, 0.1), (5, 0.01)])
        assert cfg.total_steps == 15
        assert cfg.schedule[1].learning_rate == 0.01

    def test_parse_schedule(self):
        segments = parse_schedule(" 200:0.001, 600:3e-4 ,")
        assert [(s.steps, s.learning_rate) for s in segments] == [(200, 0.001), (600, 0.0003)]
        assert AdamConfig(schedule=segments).total_steps == 800

    @pytest.mark.parametrize("text", ["", "200", "a:0.1", "10:x", "0:0.1", "10:0"])
    def test_parse_schedule_rejects(self, text: str):
        with pytest.raises(ValueError):
            parse_schedule(text)


class TestProjectedAdam:
    def test_minimizes_quadratic_on_sphere(self):
        diag = np.arange(1.0, 6.0)

        def objective(v: np.ndarray) -> tuple[float, np.ndarray]:
            return float(v @ (diag * v)), 2.0 * diag * v

        cfg = AdamConfig(schedule=[(1000, 0.01), (500, 0.001), (500, 0.0001)])
        trace = projected_adam(objective, np.ones(5), cfg, UnitSphere(), seed=0)
        assert trace.steps == 2000
        assert trace.values.shape == (2001,)
        assert trace.best_value <= 1.0 + 1e-3
        assert abs(np.linalg.norm(trace.final) - 1.0) <= 1e-12
        assert trace.best_value == pytest.approx(float(trace.values.min()))

    def test_is_reproducible(self):
        def objective(v: np.ndarray) -> tuple[float, np.ndarray]:
            return float(np.sum(v**4)), 4.0 * v**3

        cfg = AdamConfig(schedule=[(50, 0.05)])
        a = projected_adam(objective, np.array([1.0, 2.0, 3.0]), cfg, UnitSphere())
        b = projected_adam(objective, np.array([1.0, 2.0, 3.0]), cfg, UnitSphere())
        assert np.array_equal(a.values, b.values)

    def test_aborts_on_nan(self):
        def objective(v: np.ndarray) -> tuple[float, np.ndarray]:
            return float("nan"), v

        with pytest.raises(OptimizerAbortError) as excinfo:
            projected_adam(objective, np.ones(3), AdamConfig(schedule=[(5, 0.1)]), UnitSphere())
        assert excinfo.value.step == 0

    @pytest.mark.parametrize(
        "proj",
        [
            ProductProjection([(UnitSphere(), 3), (BallAround(np.ones(3), 0.2), 3)]),
            AnnulusAround(np.ones(6), 0.05, 0.3),
        ],
        ids=["sphere_times_ball", "annulus"],
    )
    def test_every_iterate_is_feasible(self, proj):
        visited: list[np.ndarray] = []

        def objective(v: np.ndarray) -> tuple[float, np.ndarray]:
            visited.append(v.copy())
            return float(np.sum(v**3)), 3.0 * v**2

        init = np.array([2.0, -1.0, 0.5, 3.0, 0.0, 1.0])
        projected_adam(objective, init, AdamConfig(schedule=[(200, 0.1)]), proj)
        assert len(visited) == 201
        assert all(proj.contains(v) for v in visited)

    def test_zero_gradient_leaves_iterate_unchanged(self):
        init = np.array([0.1, -0.2, 0.05])

        def objective(v: np.ndarray) -> tuple[float, np.ndarray]:
            return 1.0, np.zeros_like(v)

        trace = projected_adam(objective, init, AdamConfig(schedule=[(25, 0.5)]), BallAround(np.zeros(3), 1.0))
        assert np.array_equal(trace.final, init)
        assert np.all(trace.values == 1.0)


class TestGradientDescent:
    def test_converges_from_local_start(self):
        inst = generate_instance(10, 200, seed=3)
        w0 = inst.w_star + 0.1 * random_unit_vector(np.random.default_rng(0), 10)
        trace = gradient_descent(inst, w0, eta=0.1, max_steps=500, dist_tol=0.01)
        assert trace.distances[-1] <= 0.01
        assert trace.steps < 500
        assert trace.is_monotone

    def test_stops_immediately_at_truth(self, small_instance: Instance):
        trace = gradient_descent(small_instance, small_instance.w_star, eta=0.1, max_steps=10, dist_tol=0.01)
        assert trace.steps == 0

    def test_rejects_bad_eta(self, small_instance: Instance):
        with pytest.raises(ParameterError):
            gradient_descent(small_instance, small_instance.w_star, eta=0.0, max_steps=10, dist_tol=0.01)

    def test_large_step_is_unstable(self):
        inst = generate_instance(32, 64, seed=4)
        w0 = inst.w_star + 0.3 * random_unit_vector(np.random.default_rng(4), 32)
        try:
            trace = gradient_descent(inst, w0, eta=10.0, max_steps=200, dist_tol=1e-12)
        except DivergenceError as exc:
            assert exc.step >= 1
            assert exc.details["loss"] > 1e12 or not np.isfinite(exc.loss)
        else:
            assert not trace.is_monotone


class TestGradientFlow:
    def test_population_flow_contracts(self):
        w_star = np.zeros(10)
        w_star[0] = 1.0
        w0 = w_star + 0.3 * random_unit_vector(np.random.default_rng(1), 10)
        trace = gradient_flow(w0, dt=0.01, T=5.0, field=FlowField.POPULATION, method=FlowMethod.RK4)
        assert trace.steps == 500
        assert trace.is_monotone
        assert contraction_slope(trace, 0.01) <= -3.5

    def test_population_flow_near_truth_contracts_at_curvature_rate(self):
        w_star = np.zeros(10)
        w_star[0] = 1.0
        w0 = w_star + 0.1 * random_unit_vector(np.random.default_rng(6), 10)
        trace = gradient_flow(w0, dt=0.01, T=5.0)
        # 최소 모집단 곡률 2 → 기울기 ≈ −4
        assert contraction_slope(trace, 0.01) <= -3.9

    def test_distance_decay_follows_onepoint_ratio(self):
        w_star = np.zeros(6)
        w_star[0] = 1.0
        dt = 0.01
        w0 = w_star + 0.3 * random_unit_vector(np.random.default_rng(7), 6)
        trace = gradient_flow(w0, dt=dt, T=2.0, record_iterates=True)
        assert len(trace.iterates) == trace.steps + 1
        assert np.array_equal(trace.iterates[-1], trace.final)

        ratios = np.array([pop_onepoint_ratio(w) for w in trace.iterates])
        assert ratios.min() > 0
        rates = np.diff(np.log(trace.distances)) / dt
        bound = -2.0 * np.minimum(ratios[:-1], ratios[1:])
        assert np.all(rates <= bound * (1.0 - 1e-3))

    def test_iterates_not_recorded_by_default(self):
        trace = gradient_flow(np.array([1.2, 0.1]), dt=0.1, T=0.5)
        assert trace.iterates == []

    def test_euler_and_rk4_agree_for_small_steps(self):
        w0 = np.array([1.2, 0.1, -0.1])
        euler = gradient_flow(w0, dt=1e-3, T=0.5, method=FlowMethod.EULER)
        rk4 = gradient_flow(w0, dt=1e-3, T=0.5, method=FlowMethod.RK4)
        assert np.allclose(euler.final, rk4.final, atol=1e-2)

    def test_empirical_flow(self, small_instance: Instance):
        w0 = small_instance.w_star + 0.05 * random_unit_vector(np.random.default_rng(2), 8)
        trace = gradient_flow(w0, dt=0.01, T=1.0, field=FlowField.EMPIRICAL, inst=small_instance)
        assert trace.distances[-1] < trace.distances[0]

    def test_rejects_bad_step(self):
        with pytest.raises(ParameterError):
            gradient_flow(np.ones(3), dt=0.1, T=0.05)

    def test_slope_needs_distances(self):
        w0 = np.array([1.0, 0.0])
        trace = gradient_flow(w0, dt=0.1, T=0.2)
        with pytest.raises(ParameterError):
            contraction_slope(trace, 0.1)
