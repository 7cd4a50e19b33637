"""몬테카를로 확률 보조정리 검증 테스트

통계 검사는 고정 시드에서 결정적입니다. 참 가설은 통과하고 음성 대조군은
실패해야 합니다.
"""

import math

import numpy as np
import pytest

from phase_probe.addone.ks import ks_critical, ks_two_sample
from phase_probe.addone.models import Selector, SummandKind, TestReport
from phase_probe.addone.sampling import BATCH_ELEMENTS, batched_generators, reference_generator
from phase_probe.addone.tails import (
    empirical_min_z,
    expected_max_normal,
    extreme_value_mean,
    quadratic_form_eigenpairs,
    quadratic_form_tail,
    tail_lower_bound,
)
from phase_probe.addone.verification import (
    verify_addone_identity,
    verify_inner_product_independence,
    verify_zj_marginal,
)
from phase_probe.landscape.models import Instance
from phase_probe.utils.exceptions import ParameterError, SemidefiniteFormError


class TestSampling:
    def test_batches_cover_all_trials(self):
        sizes = [size for _, size in batched_generators(10_000, BATCH_ELEMENTS // 1000, seed=1)]
        assert sum(sizes) == 10_000
        assert sizes[0] == 1000

    def test_batches_are_reproducible(self):
        a = [rng.standard_normal(3) for rng, _ in batched_generators(5, 4, seed=9)]
        b = [rng.standard_normal(3) for rng, _ in batched_generators(5, 4, seed=9)]
        assert all(np.array_equal(x, y) for x, y in zip(a, b, strict=True))

    def test_reference_stream_differs_from_batches(self):
        rng, _ = next(batched_generators(1, 1, seed=3))
        assert not np.array_equal(rng.standard_normal(4), reference_generator(3).standard_normal(4))


class TestKS:
    def test_critical_value(self):
        assert ks_critical(100, 100) == pytest.approx(1.628 * math.sqrt(0.02))

    def test_same_distribution_passes(self):
        rng = np.random.default_rng(0)
        result = ks_two_sample(rng.standard_normal(4000), rng.standard_normal(4000))
        assert result.passed

    def test_shifted_distribution_fails(self):
        rng = np.random.default_rng(0)
        result = ks_two_sample(rng.standard_normal(4000) + 0.5, rng.standard_normal(4000))
        assert not result.passed


class TestZjMarginal:
    @pytest.mark.parametrize("selector", [Selector.ARGMIN_Y, Selector.ARGMAX_Y])
    def test_y_selected_index_is_gaussian(self, selector: Selector):
        report = verify_zj_marginal(20, 5, selector, trials=4000, seed=17)
        assert report.passed
        assert report.n_trials == 4000

    def test_z_dependent_selector_fails(self):
        report = verify_zj_marginal(20, 5, Selector.ARGMAX_Z_NORM, trials=4000, seed=17)
        assert not report.passed

    def test_minimum_trials(self):
        with pytest.raises(ParameterError):
            verify_zj_marginal(20, 5, Selector.ARGMIN_Y, trials=999, seed=0)


class TestAddOneIdentity:
    @pytest.mark.parametrize("kind", [SummandKind.HESSIAN_FORM, SummandKind.ONEPOINT_FORM])
    def test_identity_holds(self, kind: SummandKind):
        report = verify_addone_identity(50, 10, trials=5000, seed=1, f_kind=kind)
        assert report.passed, report.summary()

    def test_control_fails(self):
        report = verify_addone_identity(50, 10, trials=5000, seed=1, control=True)
        assert not report.passed
        assert report.details["control"] is True


class TestInnerProductIndependence:
    def test_gaussian_passes(self):
        report = verify_inner_product_independence(5, 8, trials=20_000, seed=2)
        assert report.passed, report.summary()
        assert report.reference == 1.0

    def test_rademacher_control_fails(self):
        report = verify_inner_product_independence(5, 10, trials=20_000, seed=2, gaussian=False)
        assert not report.passed

    def test_requires_two_samples(self):
        with pytest.raises(ParameterError):
            verify_inner_product_independence(1, 8, trials=20_000, seed=0)

    def test_minimum_trials(self):
        with pytest.raises(ParameterError):
            verify_inner_product_independence(5, 8, trials=5000, seed=0)

    def test_fourth_moment_bands(self):
        trials = 20_000
        default = verify_inner_product_independence(5, 8, trials=trials, seed=3)
        assert default.details["fourth_band"] == "standard_error"
        assert default.details["fourth_bound"] == pytest.approx(3.0 * np.sqrt(80.0) / np.sqrt(trials), rel=0.1)
        fixed = verify_inner_product_independence(5, 8, trials=trials, seed=3, fourth_band=5.0)
        assert fixed.details["fourth_bound"] == pytest.approx(5.0 / np.sqrt(trials))
        assert fixed.details["fourth_moment"] == default.details["fourth_moment"]

    def test_rejects_non_positive_band(self):
        with pytest.raises(ParameterError):
            verify_inner_product_independence(5, 8, trials=20_000, seed=0, fourth_band=0.0)


class TestExtremeValue:
    def test_expected_max_small_n(self):
        assert expected_max_normal(1) == pytest.approx(0.0, abs=1e-9)
        assert expected_max_normal(2) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-8)

    def test_mean_matches_exact(self):
        report = extreme_value_mean(100, trials=5000, seed=4)
        assert report.passed
        assert isinstance(report.reference, tuple)
        # 최솟값 평균은 최댓값 평균의 부호 반전
        gap = report.details["mean_max"] + report.details["mean_min"]
        assert abs(gap) <= 4.0 * math.hypot(report.details["se"], report.details["se_min"])

    def test_asymptotic_ratio_band(self):
        report = extreme_value_mean(10_000, trials=200, seed=4)
        assert report.statistic_name == "extreme_value_ratio"
        assert report.reference == (0.75, 1.0)
        assert report.passed

    def test_rejects_bad_arguments(self):
        with pytest.raises(ParameterError):
            extreme_value_mean(1, trials=100, seed=0)
        with pytest.raises(ParameterError):
            extreme_value_mean(10, trials=1, seed=0)


class TestQuadraticForm:
    def test_eigenpairs(self):
        spectrum = quadratic_form_eigenpairs(1.0, 0.5)
        assert spectrum.lambda_plus == pytest.approx(3.0)
        assert spectrum.lambda_minus == pytest.approx(-0.25)
        assert spectrum.trace == pytest.approx(2.75)
        assert spectrum.det == pytest.approx(-0.75)
        matrix = np.array([[spectrum.a, spectrum.b], [spectrum.b, spectrum.c]])
        assert np.allclose(matrix @ spectrum.v_minus, spectrum.lambda_minus * spectrum.v_minus)
        assert np.allclose(matrix @ spectrum.v_plus, spectrum.lambda_plus * spectrum.v_plus)

    def test_eigenpairs_negative_trace(self):
        spectrum = quadratic_form_eigenpairs(0.1, 0.1)
        assert spectrum.lambda_minus < 0
        assert spectrum.lambda_plus * spectrum.lambda_minus == pytest.approx(spectrum.det)

    def test_tail_exceeds_lower_bound(self):
        report = quadratic_form_tail(1.0, 0.5, t=3.0, trials=100_000, seed=6)
        assert report.passed
        bound = tail_lower_bound(quadratic_form_eigenpairs(1.0, 0.5), 3.0, 0.1)
        assert report.reference == (bound, 1.0)
        assert report.details["lambda_minus"] == pytest.approx(-0.25)

    def test_semidefinite_form_is_rejected(self):
        with pytest.raises(SemidefiniteFormError):
            quadratic_form_tail(1.0, 0.0, t=1.0, trials=100, seed=0)

    def test_negative_beta_is_rejected(self):
        with pytest.raises(ParameterError):
            quadratic_form_tail(1.0, -0.5, t=1.0, trials=100, seed=0)

    def test_min_z_at_truth_is_non_negative(self, small_instance: Instance):
        assert empirical_min_z(small_instance, small_instance.w_star) >= 0.0


def test_report_serializes_pass_alias():
    report = TestReport(
        statistic_name="x",
        observed=0.1,
        reference=(0.0, 1.0),
        n_trials=10,
        passed=True,
        seed=0,
    )
    dumped = report.model_dump(by_alias=True)
    assert dumped["pass"] is True
    assert "[PASS]" in report.summary()
    assert TestReport.model_validate(dumped).passed
