"""극단 표본 인덱스 J 기반 폐형식 적대적 증명서

- hessian_thm23: J = argmax w*ᵀxᵢ, u = x_J/‖x_J‖, δ = −x_J(w*ᵀx_J)/‖x_J‖²
- hessian_thm21: J = argmin (3(wᵀxᵢ)² − yᵢ²), u = x_J 의 span{w, w*}⊥ 사영
- onepoint_thm33: J = argmax w*ᵀxᵢ, δ = −(3/2)·x_J(w*ᵀx_J)/‖x_J‖²

np.argmax / np.argmin / 안정 정렬은 동률에서 가장 작은 인덱스를 고릅니다.
"""

import numpy as np
from loguru import logger

from phase_probe.landscape.empirical import (
    as_vector,
    curvature_weights,
    decompose,
    hessian_quadratic,
    onepoint_ratio,
    project,
)
from phase_probe.landscape.models import BETA_THRESHOLD, Instance
from phase_probe.probes.models import Certificate, CertificateKind
from phase_probe.utils.exceptions import DegenerateDirectionError, ParameterError

# 직교 여공간 사영이 이 상대 크기 이하이면 방향이 없다고 판단
_COMPLEMENT_TOL = 1e-10


def _check_samples(inst: Instance) -> None:
    if inst.n < 2:
        raise ParameterError(f"증명서에는 n ≥ 2 가 필요합니다 (n={inst.n})", details={"n": inst.n})


def _extreme_sample(inst: Instance) -> tuple[int, np.ndarray, float, float]:
    """J = argmax w*ᵀxᵢ 와 x_J, w*ᵀx_J, ‖x_J‖²"""
    b = project(inst.samples, inst.w_star)
    index = int(np.argmax(b))
    x = inst.samples[index]
    return index, x, float(b[index]), float(x @ x)


def orthogonal_complement_direction(v: np.ndarray, w: np.ndarray, w_star: np.ndarray) -> np.ndarray:
    """
    v 를 span{w, w*}⊥ 로 사영한 단위 벡터

    Gram-Schmidt 를 두 번 적용해 수치 직교성을 유지합니다.

    Raises:
        DegenerateDirectionError: 사영 결과가 영벡터에 가까움 (d ≤ 2 등)
    """
    w_star = np.asarray(w_star, dtype=np.float64)
    d = w_star.shape[0]
    v = as_vector("v", v, d)
    w = as_vector("w", w, d)

    basis = [w_star / np.linalg.norm(w_star)]
    perp = w - (w @ basis[0]) * basis[0]
    perp_norm = float(np.linalg.norm(perp))
    if perp_norm > BETA_THRESHOLD:
        basis.append(perp / perp_norm)

    q = v.copy()
    for _ in range(2):
        for e in basis:
            q -= (q @ e) * e

    norm = float(np.linalg.norm(q))
    if norm <= _COMPLEMENT_TOL * max(1.0, float(np.linalg.norm(v))):
        raise DegenerateDirectionError(
            "span{w, w*} 의 직교 여공간 사영이 영벡터입니다",
            details={"norm": norm, "d": d},
        )
    return q / norm


def certificate_hessian_thm23(inst: Instance) -> Certificate:
    """
    국소 영역 음의 곡률 증명서 (w* 근방)

    (u_J, w* + δ_J) 에서 헤시안 이차형식을 평가합니다. extra 에는
    같은 u_J 에 대한 w* 에서의 값(baseline)과 w*ᵀx_J 가 들어갑니다.
    """
    _check_samples(inst)
    index, x, b_j, norm_sq = _extreme_sample(inst)
    u = x / np.sqrt(norm_sq)
    delta = -x * b_j / norm_sq
    w = inst.w_star + delta

    value = hessian_quadratic(inst, w, u)
    delta_norm = float(np.linalg.norm(delta))
    logger.debug(f"hessian_thm23 증명서: J={index}, ‖δ‖={delta_norm:.4f}, 값={value:.6g}")

    return Certificate(
        kind=CertificateKind.HESSIAN_THM23,
        index=index,
        w=w,
        value=value,
        delta_norm=delta_norm,
        u=u,
        extra={
            "baseline_value": hessian_quadratic(inst, inst.w_star, u),
            "w_star_projection": b_j,
            "sample_norm": float(np.sqrt(norm_sq)),
        },
    )


def certificate_hessian_thm21(inst: Instance, w: np.ndarray) -> Certificate:
    """
    β > 0 인 임의의 점 w 에서의 음의 곡률 증명서

    J 는 곡률 가중치 zᵢ 의 최솟값 인덱스입니다. x_J 가 span{w, w*} 안에
    있으면 다음 순위 인덱스로 넘어갑니다.

    Raises:
        DegenerateDirectionError: β ≤ 1e-12 이거나 모든 표본의 여공간 사영이 0
    """
    w = as_vector("w", w, inst.d)
    point = decompose(w, inst.w_star)
    if point.beta <= BETA_THRESHOLD:
        raise DegenerateDirectionError(
            f"β = {point.beta!r} 인 점에서는 증명서를 만들 수 없습니다",
            details={"beta": point.beta},
        )

    weights = curvature_weights(inst, w)
    order = np.argsort(weights, kind="stable")
    for rank, index in enumerate(order):
        try:
            u = orthogonal_complement_direction(inst.samples[index], w, inst.w_star)
        except DegenerateDirectionError:
            logger.warning(f"hessian_thm21: 표본 {int(index)} 의 여공간 사영이 0, 다음 순위로 진행")
            continue
        value = hessian_quadratic(inst, w, u)
        logger.debug(f"hessian_thm21 증명서: J={int(index)} (순위 {rank}), z_J={weights[index]:.4f}")
        return Certificate(
            kind=CertificateKind.HESSIAN_THM21,
            index=int(index),
            w=w.copy(),
            value=value,
            delta_norm=float(np.linalg.norm(point.delta)),
            u=u,
            extra={
                "z_j": float(weights[index]),
                "z_min": float(weights[order[0]]),
                "rank": rank,
                "alpha": point.alpha,
                "beta": point.beta,
            },
        )

    raise DegenerateDirectionError("span{w, w*}⊥ 에 성분이 있는 표본이 없습니다", details={"n": inst.n})


def certificate_onepoint_thm33(inst: Instance) -> Certificate:
    """one-point 비율 음수 증명서: w = w* + δ_J 에서의 비율"""
    _check_samples(inst)
    index, x, b_j, norm_sq = _extreme_sample(inst)
    delta = -1.5 * x * b_j / norm_sq
    w = inst.w_star + delta

    value = onepoint_ratio(inst, w)
    delta_norm = float(np.linalg.norm(delta))
    logger.debug(f"onepoint_thm33 증명서: J={index}, ‖δ‖={delta_norm:.4f}, 비율={value:.6g}")

    return Certificate(
        kind=CertificateKind.ONEPOINT_THM33,
        index=index,
        w=w,
        value=value,
        delta_norm=delta_norm,
        extra={"w_star_projection": b_j, "sample_norm": float(np.sqrt(norm_sq))},
    )
