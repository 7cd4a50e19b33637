"""경험적 헤시안 최소 고유값: 조밀 고유분해, Lanczos, 이동 power iteration

행렬을 만들지 않는 두 방식은 hessian_vector_product 만 사용합니다.
"""

import numpy as np
from loguru import logger
from scipy.linalg import eigh, eigh_tridiagonal

from phase_probe.config.settings import settings
from phase_probe.landscape.empirical import as_vector, curvature_weights, hessian_quadratic, hessian_vector_product
from phase_probe.landscape.instance import make_rng, random_unit_vector
from phase_probe.landscape.models import Instance
from phase_probe.spectral.models import EigenMethod, SpectralEstimate
from phase_probe.utils.exceptions import CapacityError, ParameterError

# Krylov 부분공간이 불변이 되었다고 보는 β 크기
_BREAKDOWN = 1e-14

MIN_LANCZOS_ITERS = 10


def _residual(inst: Instance, w: np.ndarray, v: np.ndarray) -> tuple[float, float]:
    """단위 벡터 v 의 Rayleigh 몫 λ 와 ‖Hv − λv‖"""
    hv = hessian_vector_product(inst, w, v)
    lam = hessian_quadratic(inst, w, v)
    return lam, float(np.linalg.norm(hv - lam * v))


def _is_converged(residual: float, lam: float, tol: float) -> bool:
    return residual <= tol * (1.0 + abs(lam))


def dense_hessian(inst: Instance, w: np.ndarray) -> np.ndarray:
    """∇²L(w) = (1/n)·Xᵀ diag(3(wᵀxᵢ)² − yᵢ²) X (대칭화)"""
    weights = curvature_weights(inst, w)
    hessian = inst.samples.T @ (weights[:, None] * inst.samples) / inst.n
    return 0.5 * (hessian + hessian.T)


def min_eigen_dense(inst: Instance, w: np.ndarray) -> SpectralEstimate:
    """
    조밀 헤시안의 정확한 최소 고유값 (scipy.linalg.eigh)

    Raises:
        CapacityError: d 가 조밀 상한(기본 2048) 초과
    """
    cap = settings.spectral.dense_cap
    if inst.d > cap:
        raise CapacityError("dense Hessian", inst.d, cap)
    w = as_vector("w", w, inst.d)

    evals, evecs = eigh(dense_hessian(inst, w), subset_by_index=[0, 0])
    v = evecs[:, 0] / np.linalg.norm(evecs[:, 0])
    lam, residual = _residual(inst, w, v)
    logger.debug(f"조밀 고유분해: d={inst.d}, λ_min={evals[0]:.10g}, 잔차={residual:.3e}")

    return SpectralEstimate(
        lambda_min=lam,
        eigenvector=v,
        residual=residual,
        iterations=1,
        converged=_is_converged(residual, lam, settings.spectral.tol),
        method=EigenMethod.DENSE,
    )


def min_eigen_lanczos(
    inst: Instance,
    w: np.ndarray,
    max_iters: int | None = None,
    tol: float | None = None,
    seed: int = 0,
) -> SpectralEstimate:
    """
    완전 재직교화 Lanczos 로 최소 고유값 추정

    Krylov 기저는 min(max_iters, d) 개까지 저장합니다. 매 반복 삼중대각
    Ritz 문제(scipy.linalg.eigh_tridiagonal)의 최소 Ritz 쌍을 구하고,
    잔차 추정치가 기준을 만족하면 실제 잔차 ‖Hv − λv‖ 로 확인합니다.

    Args:
        inst: 문제 인스턴스
        w: 헤시안을 평가할 점
        max_iters: 최대 반복 (10 이상, 기본 settings.spectral.max_iters)
        tol: 잔차 허용 오차 (기본 settings.spectral.tol)
        seed: 시작 벡터 시드

    Returns:
        SpectralEstimate (수렴 실패 시 최선 추정과 converged=False)
    """
    max_iters = settings.spectral.max_iters if max_iters is None else max_iters
    tol = settings.spectral.tol if tol is None else tol
    if max_iters < MIN_LANCZOS_ITERS:
        raise ParameterError(
            f"max_iters 는 {MIN_LANCZOS_ITERS} 이상이어야 합니다 (max_iters={max_iters})",
            details={"max_iters": max_iters},
        )
    w = as_vector("w", w, inst.d)

    k_max = min(max_iters, inst.d)
    basis = np.zeros((k_max, inst.d))
    alphas: list[float] = []
    betas: list[float] = []
    q = random_unit_vector(make_rng(seed), inst.d)

    best: tuple[float, np.ndarray, float] | None = None
    for j in range(k_max):
        basis[j] = q
        hq = hessian_vector_product(inst, w, q)
        alpha = float(q @ hq)
        r = hq - alpha * q
        if j > 0:
            r -= betas[-1] * basis[j - 1]
        for _ in range(2):
            r -= basis[: j + 1].T @ (basis[: j + 1] @ r)
        beta = float(np.linalg.norm(r))
        alphas.append(alpha)

        if j == 0:
            theta, y = alpha, np.ones(1)
        else:
            thetas, ys = eigh_tridiagonal(
                np.array(alphas), np.array(betas), select="i", select_range=(0, 0)
            )
            theta, y = float(thetas[0]), ys[:, 0]

        estimate = beta * abs(float(y[-1]))
        last = j == k_max - 1 or beta <= _BREAKDOWN
        if _is_converged(estimate, theta, tol) or last:
            v = basis[: j + 1].T @ y
            v /= np.linalg.norm(v)
            lam, residual = _residual(inst, w, v)
            if best is None or residual < best[2]:
                best = (lam, v, residual)
            if _is_converged(residual, lam, tol):
                logger.debug(f"Lanczos 수렴: iters={j + 1}, λ_min={lam:.10g}, 잔차={residual:.3e}")
                return SpectralEstimate(lam, v, residual, j + 1, True, EigenMethod.LANCZOS)
            if last:
                break

        betas.append(beta)
        q = r / beta

    assert best is not None
    lam, v, residual = best
    logger.warning(f"Lanczos 미수렴: iters={len(alphas)}, λ_min={lam:.10g}, 잔차={residual:.3e}")
    return SpectralEstimate(lam, v, residual, len(alphas), False, EigenMethod.LANCZOS)


def spectral_norm_bound(inst: Instance, w: np.ndarray, iters: int | None = None, seed: int = 0) -> float:
    """power iteration ‖H‖ 추정치 × shift_factor (기본 50회, 1.2배)"""
    iters = settings.spectral.norm_iters if iters is None else iters
    w = as_vector("w", w, inst.d)
    v = random_unit_vector(make_rng(seed), inst.d)
    estimate = 0.0
    for _ in range(iters):
        hv = hessian_vector_product(inst, w, v)
        estimate = float(np.linalg.norm(hv))
        if estimate == 0.0:
            break
        v = hv / estimate
    return settings.spectral.shift_factor * estimate


def min_eigen_power(
    inst: Instance,
    w: np.ndarray,
    max_iters: int = 20000,
    tol: float | None = None,
    seed: int = 0,
) -> SpectralEstimate:
    """
    σI − H 의 power iteration 으로 최소 고유값 추정 (σ = spectral_norm_bound)

    수렴 속도는 (σ − λ₂)/(σ − λ₁) 에 달려 있어 Lanczos 보다 느립니다.
    """
    tol = settings.spectral.tol if tol is None else tol
    w = as_vector("w", w, inst.d)
    sigma = spectral_norm_bound(inst, w, seed=seed)
    v = random_unit_vector(make_rng(seed + 1), inst.d)

    hv = hessian_vector_product(inst, w, v)
    lam, residual = 0.0, np.inf
    for step in range(max_iters + 1):
        lam = float(v @ hv)
        residual = float(np.linalg.norm(hv - lam * v))
        if _is_converged(residual, lam, tol):
            logger.debug(f"power iteration 수렴: iters={step}, λ_min={lam:.10g}")
            return SpectralEstimate(hessian_quadratic(inst, w, v), v, residual, step, True, EigenMethod.POWER)
        y = sigma * v - hv
        v = y / np.linalg.norm(y)
        hv = hessian_vector_product(inst, w, v)

    logger.warning(f"power iteration 미수렴: λ_min={lam:.10g}, 잔차={residual:.3e}")
    return SpectralEstimate(lam, v, residual, max_iters, False, EigenMethod.POWER)
