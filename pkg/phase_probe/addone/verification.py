"""add-one 기법과 가우시안 내적 독립성의 몬테카를로 검증

Y 는 표준정규, 인덱스 J 는 Y 만으로 정해집니다. 각 검사에는 일부러 가정을
깨는 음성 대조군 옵션이 있으며 대조군은 통과하면 안 됩니다.
"""

import numpy as np
from loguru import logger

from phase_probe.addone.ks import ks_two_sample
from phase_probe.addone.models import Selector, SummandKind, TestReport
from phase_probe.addone.sampling import batched_generators, reference_generator
from phase_probe.utils.exceptions import ParameterError

MIN_TRIALS = 1000
MIN_INDEPENDENCE_TRIALS = 10_000


def _check_sizes(n: int, d: int, trials: int, min_trials: int) -> None:
    if n < 1 or d < 1:
        raise ParameterError(f"n, d 는 1 이상이어야 합니다 (n={n}, d={d})", details={"n": n, "d": d})
    if trials < min_trials:
        raise ParameterError(
            f"trials 는 {min_trials} 이상이어야 합니다 (trials={trials})",
            details={"trials": trials, "min_trials": min_trials},
        )


def _select(selector: Selector, z: np.ndarray, y: np.ndarray) -> np.ndarray:
    match Selector(selector):
        case Selector.ARGMIN_Y:
            return np.argmin(y, axis=1)
        case Selector.ARGMAX_Y:
            return np.argmax(y, axis=1)
        case Selector.ARGMAX_Z_NORM:
            return np.argmax(np.sum(z**2, axis=2), axis=1)


def _summand(kind: SummandKind, a: np.ndarray, y: np.ndarray) -> np.ndarray:
    if SummandKind(kind) == SummandKind.HESSIAN_FORM:
        return a**2 * y
    return a**2 * (a + 2.0 * y) * (a + y)


def _projections(z: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """(b, n, d) 표본의 (b, d) 방향 정규화 사영 zᵢᵀz'/‖z'‖"""
    unit = direction / np.linalg.norm(direction, axis=1, keepdims=True)
    return np.einsum("bnd,bd->bn", z, unit)


def verify_zj_marginal(
    n: int,
    d: int,
    selector: Selector,
    trials: int,
    seed: int,
) -> TestReport:
    """
    Y 로 고른 인덱스 J 의 Z_J 주변분포가 N(0, I_d) 인지 검사

    ‖Z_J‖² 표본을 새로 뽑은 χ²_d 표본(가우시안 노름 제곱)과 KS 비교합니다.
    argmax_z_norm 선택자는 Z 에 의존하는 음성 대조군입니다.
    """
    _check_sizes(n, d, trials, MIN_TRIALS)
    logger.info(f"Z_J 주변분포 검사: n={n}, d={d}, selector={selector}, trials={trials}")

    chunks = []
    for rng, size in batched_generators(trials, n * (d + 1), seed):
        z = rng.standard_normal((size, n, d))
        y = rng.standard_normal((size, n))
        picked = z[np.arange(size), _select(selector, z, y)]
        chunks.append(np.sum(picked**2, axis=1))
    observed = np.concatenate(chunks)

    reference = np.sum(reference_generator(seed).standard_normal((trials, d)) ** 2, axis=1)
    ks = ks_two_sample(observed, reference)

    report = TestReport(
        statistic_name=f"ks_zj_norm_sq[{selector}]",
        observed=ks.statistic,
        reference=ks.critical,
        n_trials=trials,
        passed=ks.passed,
        seed=seed,
        details={"pvalue": ks.pvalue, "n": n, "d": d, "selector": str(selector)},
    )
    logger.info(report.summary())
    return report


def verify_addone_identity(
    n: int,
    d: int,
    trials: int,
    seed: int,
    f_kind: SummandKind = SummandKind.HESSIAN_FORM,
    control: bool = False,
) -> TestReport:
    """
    add-one 교환 항등식의 두 변이 같은 분포인지 KS 검사

    - 좌변: f(Z_{n+1}, Z_J, Y_J) + Σ_{i≠J} f(Zᵢ, Z_J, Yᵢ), J = argmin Y
    - 우변: Σᵢ f(Zᵢ, Z_{n+1}, Yᵢ)

    f(z, z', y) 는 a = zᵀz'/‖z'‖ 에 대해 a²·y (hessian_form) 또는
    a²(a + 2y)(a + y) (onepoint_form) 입니다. 두 변은 독립적으로 추출합니다.
    control=True 이면 우변의 Z_{n+1} 을 Z_J 로 바꿉니다 (음성 대조군).
    """
    _check_sizes(n, d, trials, MIN_TRIALS)
    logger.info(f"add-one 항등식 검사: n={n}, d={d}, f={f_kind}, control={control}, trials={trials}")

    lhs_chunks, rhs_chunks = [], []
    for rng, size in batched_generators(trials, 2 * ((n + 1) * d + n), seed):
        rows = np.arange(size)

        z = rng.standard_normal((size, n + 1, d))
        y = rng.standard_normal((size, n))
        j = np.argmin(y, axis=1)
        a = _projections(z[:, :n], z[rows, j])
        a[rows, j] = _projections(z[:, n:], z[rows, j])[:, 0]
        lhs_chunks.append(np.sum(_summand(f_kind, a, y), axis=1))

        z = rng.standard_normal((size, n + 1, d))
        y = rng.standard_normal((size, n))
        if control:
            direction = z[rows, np.argmin(y, axis=1)]
        else:
            direction = z[:, n]
        rhs_chunks.append(np.sum(_summand(f_kind, _projections(z[:, :n], direction), y), axis=1))

    ks = ks_two_sample(np.concatenate(lhs_chunks), np.concatenate(rhs_chunks))
    report = TestReport(
        statistic_name=f"ks_addone[{f_kind}{',control' if control else ''}]",
        observed=ks.statistic,
        reference=ks.critical,
        n_trials=trials,
        passed=ks.passed,
        seed=seed,
        details={"pvalue": ks.pvalue, "n": n, "d": d, "control": control},
    )
    logger.info(report.summary())
    return report


def verify_inner_product_independence(
    n: int,
    d: int,
    trials: int,
    seed: int,
    gaussian: bool = True,
    fourth_band: float | None = None,
) -> TestReport:
    """
    Uᵢ = ZᵢᵀZ_{n+1}/‖Z_{n+1}‖ 가 독립 표준정규인지 세 가지로 검사

    - |corr(U₁, U₂)| ≤ 3/√T
    - |E[U₁²U₂²] − 1| ≤ k/√T (fourth_band=k 로 고정 허용치, 예: 5)
      또는 기본값 3·ŝ/√T (ŝ 는 U₁²U₂² 의 표본 표준편차, 가우시안이면 √80 ≈ 8.94)
    - (U₁ + U₂)/√2 대 새 N(0, 1) 표본 KS

    observed 는 세 검사의 (편차 / 허용치) 최댓값이며 1 이하일 때 통과입니다.
    gaussian=False 이면 좌표를 Rademacher 로 바꿉니다 (음성 대조군).
    """
    if n < 2:
        raise ParameterError(f"내적 독립성 검사에는 n ≥ 2 가 필요합니다 (n={n})", details={"n": n})
    if fourth_band is not None and fourth_band <= 0:
        raise ParameterError(f"fourth_band 는 양수여야 합니다 (fourth_band={fourth_band})", details={"fourth_band": fourth_band})
    _check_sizes(n, d, trials, MIN_INDEPENDENCE_TRIALS)
    logger.info(f"내적 독립성 검사: n={n}, d={d}, gaussian={gaussian}, trials={trials}")

    u1_chunks, u2_chunks = [], []
    for rng, size in batched_generators(trials, (n + 1) * d, seed):
        if gaussian:
            z = rng.standard_normal((size, n + 1, d))
        else:
            z = 2.0 * rng.integers(0, 2, size=(size, n + 1, d)).astype(np.float64) - 1.0
        u = _projections(z[:, :2], z[:, n])
        u1_chunks.append(u[:, 0])
        u2_chunks.append(u[:, 1])
    u1, u2 = np.concatenate(u1_chunks), np.concatenate(u2_chunks)

    root_t = np.sqrt(trials)
    corr = float(np.corrcoef(u1, u2)[0, 1])
    corr_bound = 3.0 / root_t
    product = u1**2 * u2**2
    fourth = float(np.mean(product))
    if fourth_band is None:
        fourth_bound = 3.0 * float(np.std(product, ddof=1)) / root_t
    else:
        fourth_bound = fourth_band / root_t
    ks = ks_two_sample((u1 + u2) / np.sqrt(2.0), reference_generator(seed).standard_normal(trials))

    worst = max(abs(corr) / corr_bound, abs(fourth - 1.0) / fourth_bound, ks.statistic / ks.critical)
    report = TestReport(
        statistic_name=f"inner_product_independence[{'gaussian' if gaussian else 'rademacher'}]",
        observed=worst,
        reference=1.0,
        n_trials=trials,
        passed=worst <= 1.0,
        seed=seed,
        details={
            "corr": corr,
            "corr_bound": corr_bound,
            "fourth_moment": fourth,
            "fourth_bound": fourth_bound,
            "fourth_band": "standard_error" if fourth_band is None else fourth_band,
            "ks_statistic": ks.statistic,
            "ks_critical": ks.critical,
            "ks_pvalue": ks.pvalue,
        },
    )
    logger.info(report.summary())
    return report
