"""극값 평균, 2×2 이차형식 음의 꼬리, 최소 곡률 가중치"""

import math
from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy.integrate import quad
from scipy.stats import norm

from phase_probe.addone.models import TestReport
from phase_probe.addone.sampling import batched_generators
from phase_probe.landscape.empirical import curvature_weights, decompose
from phase_probe.landscape.models import BETA_THRESHOLD, Instance
from phase_probe.utils.exceptions import ParameterError, SemidefiniteFormError

# 이 n 이상에서는 √(2 ln n) 대비 비율 범위로 판정
ASYMPTOTIC_N = 10_000
RATIO_BAND = (0.75, 1.0)


def expected_max_normal(n: int) -> float:
    """E[max_{i≤n} Yᵢ] = ∫ x·n·φ(x)·Φ(x)^{n−1} dx (수치 적분)"""
    if n < 1:
        raise ParameterError(f"n 은 1 이상이어야 합니다 (n={n})")

    def integrand(x: float) -> float:
        return x * n * math.exp(norm.logpdf(x) + (n - 1) * norm.logcdf(x))

    peak = math.sqrt(2.0 * math.log(n)) if n > 1 else 0.0
    value, _ = quad(integrand, -12.0, peak + 12.0, points=[peak], limit=200)
    return float(value)


def extreme_value_mean(n: int, trials: int, seed: int) -> TestReport:
    """
    n 개 표준정규 최댓값의 평균 추정

    n ≥ 10⁴ 이면 E[max]/√(2 ln n) ∈ [0.75, 1.0] 으로, 그보다 작으면 수치 적분한
    정확한 값과 3 표준오차 이내로 판정합니다. details 에는 대칭성 검사용
    최솟값 평균(mean_min)과 표준오차가 들어갑니다.
    """
    if n < 2:
        raise ParameterError(f"n 은 2 이상이어야 합니다 (n={n})", details={"n": n})
    if trials < 2:
        raise ParameterError(f"trials 는 2 이상이어야 합니다 (trials={trials})")
    logger.info(f"극값 평균 추정: n={n}, trials={trials}")

    maxima, minima = [], []
    for rng, size in batched_generators(trials, n, seed):
        y = rng.standard_normal((size, n))
        maxima.append(y.max(axis=1))
        minima.append(y.min(axis=1))
    mx, mn = np.concatenate(maxima), np.concatenate(minima)

    mean_max = float(np.mean(mx))
    se = float(np.std(mx, ddof=1) / np.sqrt(trials))
    scale = math.sqrt(2.0 * math.log(n))
    ratio = mean_max / scale
    details: dict[str, float | int | bool | str] = {
        "mean_max": mean_max,
        "mean_min": float(np.mean(mn)),
        "se": se,
        "se_min": float(np.std(mn, ddof=1) / np.sqrt(trials)),
        "ratio": ratio,
        "n": n,
    }

    if n >= ASYMPTOTIC_N:
        report = TestReport(
            statistic_name="extreme_value_ratio",
            observed=ratio,
            reference=RATIO_BAND,
            n_trials=trials,
            passed=RATIO_BAND[0] <= ratio <= RATIO_BAND[1],
            seed=seed,
            details=details,
        )
    else:
        exact = expected_max_normal(n)
        details["exact"] = exact
        band = (exact - 3.0 * se, exact + 3.0 * se)
        report = TestReport(
            statistic_name="extreme_value_mean",
            observed=mean_max,
            reference=band,
            n_trials=trials,
            passed=band[0] <= mean_max <= band[1],
            seed=seed,
            details=details,
        )
    logger.info(report.summary())
    return report


@dataclass(frozen=True, eq=False)
class QuadraticFormSpectrum:
    """
    z = a·W₁² + 2b·W₁W₂ + c·W₂² 의 행렬 [[a, b], [b, c]] 고유분해

    a = 3β², b = 3αβ, c = 3α² − 1
    """

    a: float
    b: float
    c: float
    lambda_plus: float
    lambda_minus: float
    v_plus: np.ndarray
    v_minus: np.ndarray

    @property
    def trace(self) -> float:
        return self.a + self.c

    @property
    def det(self) -> float:
        return self.a * self.c - self.b**2


def _eigenvector(a: float, b: float, c: float, lam: float) -> np.ndarray:
    # (A − λI)v = 0 에서 두 행 중 노름이 큰 쪽으로 직교 벡터를 고름
    first = np.array([b, lam - a])
    second = np.array([lam - c, b])
    v = first if np.linalg.norm(first) >= np.linalg.norm(second) else second
    norm_v = float(np.linalg.norm(v))
    if norm_v == 0.0:
        return np.array([1.0, 0.0]) if lam == a else np.array([0.0, 1.0])
    return v / norm_v


def quadratic_form_eigenpairs(alpha: float, beta: float) -> QuadraticFormSpectrum:
    """
    λ± = (a + c ± √((a − c)² + 4b²))/2 의 폐형식 고유쌍

    상쇄 오차를 피하려고 절댓값이 큰 고유값을 먼저 구하고 나머지는 det/λ 로 얻습니다.
    """
    a, b, c = 3.0 * beta**2, 3.0 * alpha * beta, 3.0 * alpha**2 - 1.0
    disc = math.hypot(a - c, 2.0 * b)
    det = a * c - b**2
    if a + c >= 0:
        lam_plus = (a + c + disc) / 2.0
        lam_minus = det / lam_plus if lam_plus != 0.0 else 0.0
    else:
        lam_minus = (a + c - disc) / 2.0
        lam_plus = det / lam_minus
    return QuadraticFormSpectrum(
        a=a,
        b=b,
        c=c,
        lambda_plus=lam_plus,
        lambda_minus=lam_minus,
        v_plus=_eigenvector(a, b, c, lam_plus),
        v_minus=_eigenvector(a, b, c, lam_minus),
    )


def tail_lower_bound(spectrum: QuadraticFormSpectrum, t: float, kappa: float) -> float:
    """κ·√(−λ₋/t)·e^{t/(2λ₋)}·e^{λ₊/(2λ₋)}"""
    lp, lm = spectrum.lambda_plus, spectrum.lambda_minus
    return kappa * math.sqrt(-lm / t) * math.exp(t / (2.0 * lm)) * math.exp(lp / (2.0 * lm))


def quadratic_form_tail(
    alpha: float,
    beta: float,
    t: float,
    trials: int,
    seed: int,
    kappa: float = 0.1,
) -> TestReport:
    """
    P(z ≤ −t) 몬테카를로 추정이 음의 꼬리 하한을 넘는지 검사

    Raises:
        SemidefiniteFormError: λ₋ ≥ 0 (음의 꼬리 없음, 예: β = 0, α² ≥ 1/3)
    """
    if beta < 0 or t <= 0:
        raise ParameterError(f"β ≥ 0, t > 0 이어야 합니다 (β={beta}, t={t})", details={"beta": beta, "t": t})
    if trials < 1:
        raise ParameterError(f"trials 는 1 이상이어야 합니다 (trials={trials})")

    spectrum = quadratic_form_eigenpairs(alpha, beta)
    if spectrum.lambda_minus >= 0:
        raise SemidefiniteFormError(spectrum.lambda_minus)
    logger.info(
        f"이차형식 꼬리 추정: α={alpha}, β={beta}, t={t}, "
        f"λ+={spectrum.lambda_plus:.6g}, λ-={spectrum.lambda_minus:.6g}, trials={trials}"
    )

    hits = 0
    for rng, size in batched_generators(trials, 2, seed):
        w = rng.standard_normal((size, 2))
        z = spectrum.a * w[:, 0] ** 2 + 2.0 * spectrum.b * w[:, 0] * w[:, 1] + spectrum.c * w[:, 1] ** 2
        hits += int(np.count_nonzero(z <= -t))

    estimate = hits / trials
    bound = tail_lower_bound(spectrum, t, kappa)
    report = TestReport(
        statistic_name="quadratic_form_tail",
        observed=estimate,
        reference=(bound, 1.0),
        n_trials=trials,
        passed=estimate > bound,
        seed=seed,
        details={
            "hits": hits,
            "se": math.sqrt(estimate * (1.0 - estimate) / trials),
            "lambda_plus": spectrum.lambda_plus,
            "lambda_minus": spectrum.lambda_minus,
            "trace": spectrum.trace,
            "det": spectrum.det,
            "kappa": kappa,
        },
    )
    logger.info(report.summary())
    return report


def empirical_min_z(inst: Instance, w: np.ndarray) -> float:
    """minᵢ(3(wᵀxᵢ)² − yᵢ²). β = 0 이어도 계산합니다."""
    if decompose(w, inst.w_star).beta <= BETA_THRESHOLD:
        logger.debug("β = 0 인 점의 최소 곡률 가중치 (음수가 아닐 수 있음)")
    return float(np.min(curvature_weights(inst, w)))
