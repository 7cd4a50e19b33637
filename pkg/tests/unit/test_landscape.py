"""경험적 지형 원시 연산 테스트"""

import numpy as np
import pytest

from phase_probe.config.settings import settings
from phase_probe.landscape.empirical import (
    curvature_weights,
    decompose,
    gradient,
    hessian_quadratic,
    hessian_vector_product,
    loss,
    onepoint_objective,
    onepoint_ratio,
    onepoint_ratio_expanded,
    q_objective,
)
from phase_probe.landscape.instance import generate_instance, make_rng, random_unit_vector
from phase_probe.landscape.models import Instance, WStarMode
from phase_probe.utils.exceptions import (
    DegeneratePointError,
    DimensionMismatchError,
    ParameterError,
)
from tests.helpers import central_difference, orthogonal_unit


class TestInstance:
    def test_same_seed_is_bitwise_identical(self):
        a = generate_instance(16, 32, seed=99)
        b = generate_instance(16, 32, seed=99)
        assert np.array_equal(a.samples, b.samples)
        assert np.array_equal(a.y_sq, b.y_sq)

    def test_different_seed_differs(self):
        a = generate_instance(16, 32, seed=1)
        b = generate_instance(16, 32, seed=2)
        assert not np.array_equal(a.samples, b.samples)

    def test_canonical_w_star(self, small_instance: Instance):
        expected = np.zeros(8)
        expected[0] = 1.0
        assert np.array_equal(small_instance.w_star, expected)
        assert np.array_equal(small_instance.y_sq, small_instance.samples[:, 0] ** 2)

    def test_random_unit_w_star(self, random_instance: Instance):
        assert abs(np.linalg.norm(random_instance.w_star) - 1.0) <= 1e-12
        assert np.allclose(random_instance.y_sq, (random_instance.samples @ random_instance.w_star) ** 2)

    def test_random_mode_keeps_same_samples(self):
        canonical = generate_instance(6, 30, seed=2)
        random = generate_instance(6, 30, seed=2, w_star_mode=WStarMode.RANDOM_UNIT)
        assert np.array_equal(canonical.samples, random.samples)

    def test_arrays_are_read_only(self, small_instance: Instance):
        with pytest.raises(ValueError):
            small_instance.samples[0, 0] = 1.0

    def test_negative_seed_folds_to_64_bits(self):
        a = make_rng(-1).standard_normal(4)
        b = make_rng((1 << 64) - 1).standard_normal(4)
        assert np.array_equal(a, b)

    @pytest.mark.parametrize(("d", "n"), [(0, 10), (10, 0)])
    def test_rejects_empty_shapes(self, d: int, n: int):
        with pytest.raises(ParameterError):
            generate_instance(d, n, seed=0)

    def test_from_arrays_rejects_non_unit_w_star(self):
        with pytest.raises(ParameterError):
            Instance.from_arrays(np.ones((3, 2)), np.array([1.0, 1.0]))

    def test_from_arrays_copies_input(self):
        samples = np.ones((3, 2))
        inst = Instance.from_arrays(samples, np.array([1.0, 0.0]))
        samples[0, 0] = 5.0
        assert inst.samples[0, 0] == 1.0

    def test_direct_construction_copies_caller_arrays(self):
        samples = np.array([[1.0, 2.0], [3.0, -1.0]])
        w_star = np.array([1.0, 0.0])
        y_sq = samples[:, 0] ** 2
        inst = Instance(samples=samples, w_star=w_star, y_sq=y_sq)
        assert samples.flags.writeable and y_sq.flags.writeable
        samples[0, 0] = 9.0
        y_sq[0] = 9.0
        assert inst.samples[0, 0] == 1.0 and inst.y_sq[0] == 1.0
        with pytest.raises(ValueError):
            inst.w_star[0] = 0.5

    def test_debug_checks_reject_inconsistent_labels(self, monkeypatch: pytest.MonkeyPatch):
        samples = np.array([[1.0, 2.0], [3.0, -1.0]])
        w_star = np.array([1.0, 0.0])
        wrong = np.array([1.0, 4.0])
        # 검사가 꺼져 있으면 그대로 구성
        assert Instance(samples=samples, w_star=w_star, y_sq=wrong).n == 2
        monkeypatch.setattr(settings.numerics, "debug_checks", True)
        with pytest.raises(ParameterError) as excinfo:
            Instance(samples=samples, w_star=w_star, y_sq=wrong)
        assert excinfo.value.details["index"] == 1
        assert generate_instance(5, 20, seed=3, w_star_mode=WStarMode.RANDOM_UNIT).n == 20

    def test_single_sample_is_allowed(self):
        inst = generate_instance(3, 1, seed=4)
        assert inst.n == 1
        assert loss(inst, inst.w_star) == 0.0


class TestLossAndGradient:
    def test_zero_at_truth(self, small_instance: Instance):
        assert loss(small_instance, small_instance.w_star) == 0.0
        assert np.all(gradient(small_instance, small_instance.w_star) == 0.0)

    def test_sign_symmetry(self, small_instance: Instance, rng: np.random.Generator):
        w = rng.standard_normal(8)
        assert loss(small_instance, w) == pytest.approx(loss(small_instance, -w), rel=1e-12)
        assert np.allclose(gradient(small_instance, w), -gradient(small_instance, -w))

    def test_gradient_matches_finite_difference(self, random_instance: Instance, rng: np.random.Generator):
        w = random_instance.w_star + 0.2 * rng.standard_normal(6)
        numeric = central_difference(lambda x: loss(random_instance, x), w)
        assert np.allclose(gradient(random_instance, w), numeric, rtol=1e-5, atol=1e-7)

    def test_hessian_vector_product_matches_gradient_difference(
        self, small_instance: Instance, rng: np.random.Generator
    ):
        w = small_instance.w_star + 0.3 * rng.standard_normal(8)
        v = rng.standard_normal(8)
        h = 1e-6
        numeric = (gradient(small_instance, w + h * v) - gradient(small_instance, w - h * v)) / (2 * h)
        assert np.allclose(hessian_vector_product(small_instance, w, v), numeric, rtol=1e-5, atol=1e-7)

    def test_quadratic_form_consistent_with_product(self, small_instance: Instance, rng: np.random.Generator):
        w = rng.standard_normal(8)
        u = rng.standard_normal(8)
        expected = float(u @ hessian_vector_product(small_instance, w, u))
        assert hessian_quadratic(small_instance, w, u) == pytest.approx(expected, rel=1e-10)

    def test_hessian_at_truth_is_positive_semidefinite(self, small_instance: Instance, rng: np.random.Generator):
        for _ in range(10):
            u = random_unit_vector(rng, 8)
            assert hessian_quadratic(small_instance, small_instance.w_star, u) >= 0.0

    def test_single_sample_literal(self):
        inst = Instance.from_arrays(np.array([[2.0]]), np.array([1.0]))
        assert loss(inst, np.array([0.0])) == 4.0
        assert np.all(gradient(inst, np.array([0.0])) == 0.0)

    def test_zero_inputs(self, small_instance: Instance, rng: np.random.Generator):
        assert np.all(gradient(small_instance, np.zeros(8)) == 0.0)
        assert np.all(hessian_vector_product(small_instance, rng.standard_normal(8), np.zeros(8)) == 0.0)

    def test_gradient_matches_finite_difference_at_scale(self, rng: np.random.Generator):
        inst = generate_instance(20, 50, seed=21)
        for _ in range(10):
            w = inst.w_star + 0.5 * rng.standard_normal(20) / np.sqrt(20)
            h = 1e-5 * (1.0 + np.linalg.norm(w))
            numeric = central_difference(lambda x: loss(inst, x), w, h=h)
            exact = gradient(inst, w)
            assert np.linalg.norm(exact - numeric) <= 1e-6 * np.linalg.norm(exact)

    def test_hessian_vector_product_matches_gradient_difference_at_scale(self, rng: np.random.Generator):
        inst = generate_instance(20, 50, seed=22)
        for _ in range(10):
            w = inst.w_star + 0.5 * rng.standard_normal(20) / np.sqrt(20)
            v = random_unit_vector(rng, 20)
            h = 1e-5 * (1.0 + np.linalg.norm(w))
            numeric = (gradient(inst, w + h * v) - gradient(inst, w - h * v)) / (2 * h)
            exact = hessian_vector_product(inst, w, v)
            assert np.linalg.norm(exact - numeric) <= 1e-5 * np.linalg.norm(exact)

    def test_hessian_vector_product_is_symmetric(self, rng: np.random.Generator):
        inst = generate_instance(20, 50, seed=23)
        for _ in range(20):
            w = rng.standard_normal(20)
            u, v = rng.standard_normal(20), rng.standard_normal(20)
            hu, hv = hessian_vector_product(inst, w, u), hessian_vector_product(inst, w, v)
            scale = np.linalg.norm(hu) * np.linalg.norm(v) + np.linalg.norm(hv) * np.linalg.norm(u)
            assert abs(float(hu @ v) - float(hv @ u)) <= 1e-10 * scale

    def test_quadratic_form_consistent_on_many_triples(self, rng: np.random.Generator):
        for seed in range(100):
            inst = generate_instance(12, 30, seed=seed)
            w, u = rng.standard_normal(12), rng.standard_normal(12)
            value = hessian_quadratic(inst, w, u)
            expected = float(u @ hessian_vector_product(inst, w, u))
            scale = float(np.mean((inst.samples @ u) ** 2 * np.abs(curvature_weights(inst, w))))
            assert value == pytest.approx(expected, rel=1e-10, abs=1e-10 * scale)

    def test_quadratic_form_at_truth_is_fourth_moment(self, small_instance: Instance):
        w_star = small_instance.w_star
        expected = 2.0 * np.sum((small_instance.samples @ w_star) ** 4) / small_instance.n
        assert hessian_quadratic(small_instance, w_star, w_star) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("alpha", [1.0 / np.sqrt(3.0), 0.8, 1.0, 1.5, -0.7])
    def test_hessian_semidefinite_along_truth(self, small_instance: Instance, rng: np.random.Generator, alpha: float):
        w = alpha * small_instance.w_star
        directions = rng.standard_normal((1000, 8))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        values = [hessian_quadratic(small_instance, w, u) for u in directions]
        assert min(values) >= -1e-12

    def test_curvature_weights(self, small_instance: Instance):
        weights = curvature_weights(small_instance, small_instance.w_star)
        assert np.allclose(weights, 2.0 * small_instance.y_sq)

    def test_dimension_mismatch(self, small_instance: Instance):
        with pytest.raises(DimensionMismatchError) as excinfo:
            loss(small_instance, np.ones(7))
        assert excinfo.value.details["expected"] == 8

    def test_deterministic_mode_agrees_with_blas(
        self, small_instance: Instance, rng: np.random.Generator, monkeypatch: pytest.MonkeyPatch
    ):
        w = rng.standard_normal(8)
        fast = gradient(small_instance, w)
        monkeypatch.setattr(settings.numerics, "deterministic", True)
        fixed = gradient(small_instance, w)
        assert np.allclose(fast, fixed, rtol=1e-12, atol=1e-12)


class TestOnePointRatio:
    def test_direct_matches_expanded(self, random_instance: Instance, rng: np.random.Generator):
        w = random_instance.w_star + 0.15 * random_unit_vector(rng, 6)
        assert onepoint_ratio(random_instance, w) == pytest.approx(
            onepoint_ratio_expanded(random_instance, w), rel=1e-9
        )

    def test_direct_matches_expanded_on_many_instances(self, rng: np.random.Generator):
        for seed in range(100):
            inst = generate_instance(10, 30, seed=seed, w_star_mode=WStarMode.RANDOM_UNIT)
            w = inst.w_star + rng.uniform(0.05, 1.0) * random_unit_vector(rng, 10)
            delta = w - inst.w_star
            a, b = inst.samples @ delta, inst.samples @ inst.w_star
            scale = float(np.mean(np.abs(a**2 * (a + 2 * b) * (a + b)))) / float(delta @ delta)
            assert onepoint_ratio(inst, w) == pytest.approx(onepoint_ratio_expanded(inst, w), rel=1e-10, abs=1e-10 * scale)

    def test_vanishes_at_mirror_minimum(self, small_instance: Instance, random_instance: Instance):
        for inst in (small_instance, random_instance):
            assert onepoint_ratio(inst, -inst.w_star) == pytest.approx(0.0, abs=1e-12)
            assert onepoint_ratio_expanded(inst, -inst.w_star) == pytest.approx(0.0, abs=1e-12)

    def test_debug_checks_pass_on_consistent_data(
        self, small_instance: Instance, rng: np.random.Generator, monkeypatch: pytest.MonkeyPatch
    ):
        monkeypatch.setattr(settings.numerics, "debug_checks", True)
        w = small_instance.w_star + 0.1 * random_unit_vector(rng, 8)
        assert np.isfinite(onepoint_ratio(small_instance, w))

    def test_degenerate_at_truth(self, small_instance: Instance):
        with pytest.raises(DegeneratePointError):
            onepoint_ratio(small_instance, small_instance.w_star)

    def test_objective_value_and_gradient(self, random_instance: Instance, rng: np.random.Generator):
        w = random_instance.w_star + 0.2 * random_unit_vector(rng, 6)
        value, grad = onepoint_objective(random_instance, w)
        assert value == pytest.approx(onepoint_ratio(random_instance, w), rel=1e-9)
        numeric = central_difference(lambda x: onepoint_objective(random_instance, x)[0], w)
        assert np.allclose(grad, numeric, rtol=1e-4, atol=1e-6)


class TestQObjective:
    def test_value_and_gradients(self, small_instance: Instance, rng: np.random.Generator):
        u = random_unit_vector(rng, 8)
        w = small_instance.w_star + 0.1 * rng.standard_normal(8)
        value, grad_u, grad_w = q_objective(small_instance, u, w)
        assert value == pytest.approx(hessian_quadratic(small_instance, w, u), rel=1e-12)

        numeric_u = central_difference(lambda x: q_objective(small_instance, x, w)[0], u)
        numeric_w = central_difference(lambda x: q_objective(small_instance, u, x)[0], w)
        assert np.allclose(grad_u, numeric_u, rtol=1e-5, atol=1e-7)
        assert np.allclose(grad_w, numeric_w, rtol=1e-5, atol=1e-7)


class TestDecompose:
    def test_alpha_beta_and_reconstruction(self, small_instance: Instance, rng: np.random.Generator):
        perp = orthogonal_unit(rng, small_instance.w_star)
        w = 1.1 * small_instance.w_star + 0.5 * perp
        point = decompose(w, small_instance.w_star)
        assert point.alpha == pytest.approx(1.1)
        assert point.beta == pytest.approx(0.5)
        assert point.in_local_region
        assert np.allclose(point.w_perp, perp)
        assert np.allclose(point.reconstruct(small_instance.w_star), w)
        assert np.allclose(point.delta, w - small_instance.w_star)

    def test_parallel_point_has_no_perp(self, small_instance: Instance):
        point = decompose(1.2 * small_instance.w_star, small_instance.w_star)
        assert point.w_perp is None
        assert point.beta == 0.0
        assert not point.in_local_region

    @pytest.mark.parametrize(("alpha", "beta", "inside"), [(0.6, 0.5, False), (1.3, 0.5, True), (1.0, 1.2, False)])
    def test_local_region_boundary(
        self, small_instance: Instance, rng: np.random.Generator, alpha: float, beta: float, inside: bool
    ):
        w = alpha * small_instance.w_star + beta * orthogonal_unit(rng, small_instance.w_star)
        assert decompose(w, small_instance.w_star).in_local_region is inside

    def test_rejects_non_unit_truth(self):
        with pytest.raises(ParameterError):
            decompose(np.ones(3), np.array([2.0, 0.0, 0.0]))
