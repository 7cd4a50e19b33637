"""모집단 지형 L̄ (무한 표본 극한) 폐형식 오라클

L̄(w) = (1/4)(3‖w‖⁴ + 3 − 2‖w‖² − 4(wᵀw*)²)
∇L̄(w) = (3‖w‖² − 1)w − 2(wᵀw*)w*
∇²L̄(w) = 6wwᵀ − 2w*w*ᵀ + (3‖w‖² − 1)I
"""

from enum import StrEnum

import numpy as np

from phase_probe.config.settings import settings
from phase_probe.landscape.empirical import DEGENERATE_DISTANCE, as_vector
from phase_probe.utils.exceptions import CapacityError, DegeneratePointError, ParameterError


class CriticalPointKind(StrEnum):
    """모집단 임계점 분류"""

    GLOBAL_MAX = "global_max"
    STRICT_SADDLE = "strict_saddle"
    GLOBAL_MIN = "global_min"
    NOT_CRITICAL = "not_critical"


def _resolve(w: np.ndarray, w_star: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
    """w 와 w* 정리 (w* 미지정 시 첫 번째 표준 기저)"""
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1:
        raise ParameterError("w 는 1차원 벡터여야 합니다", details={"shape": w.shape})
    if w_star is None:
        ws = np.zeros(w.shape[0])
        ws[0] = 1.0
        return w, ws
    return w, as_vector("w_star", w_star, w.shape[0])


def pop_loss(w: np.ndarray, w_star: np.ndarray | None = None) -> float:
    """모집단 손실 L̄(w)"""
    w, ws = _resolve(w, w_star)
    sq = float(w @ w)
    inner = float(w @ ws)
    return 0.25 * (3.0 * sq**2 + 3.0 - 2.0 * sq - 4.0 * inner**2)


def pop_gradient(w: np.ndarray, w_star: np.ndarray | None = None) -> np.ndarray:
    """모집단 기울기 ∇L̄(w)"""
    w, ws = _resolve(w, w_star)
    return (3.0 * float(w @ w) - 1.0) * w - 2.0 * float(w @ ws) * ws


def pop_hessian_quadratic(w: np.ndarray, u: np.ndarray, w_star: np.ndarray | None = None) -> float:
    """모집단 헤시안 이차형식 uᵀ∇²L̄(w)u (O(d))"""
    w, ws = _resolve(w, w_star)
    u = as_vector("u", u, w.shape[0])
    return 6.0 * float(w @ u) ** 2 - 2.0 * float(ws @ u) ** 2 + (3.0 * float(w @ w) - 1.0) * float(u @ u)


def pop_hessian_dense(w: np.ndarray, w_star: np.ndarray | None = None) -> np.ndarray:
    """
    모집단 헤시안 조밀 행렬

    Raises:
        CapacityError: d 가 조밀 상한 (기본 4096) 초과
    """
    w, ws = _resolve(w, w_star)
    d = w.shape[0]
    cap = settings.population.dense_cap
    if d > cap:
        raise CapacityError("모집단 헤시안 차원", size=d, cap=cap)
    return 6.0 * np.outer(w, w) - 2.0 * np.outer(ws, ws) + (3.0 * float(w @ w) - 1.0) * np.eye(d)


def pop_onepoint_ratio(w: np.ndarray, w_star: np.ndarray | None = None) -> float:
    """모집단 one-point 비율 ⟨∇L̄(w), w − w*⟩ / ‖w − w*‖²"""
    w, ws = _resolve(w, w_star)
    delta = w - ws
    dist_sq = float(delta @ delta)
    if np.sqrt(dist_sq) <= DEGENERATE_DISTANCE:
        raise DegeneratePointError(distance=float(np.sqrt(dist_sq)))
    return float(pop_gradient(w, ws) @ delta / dist_sq)


def classify_critical_point(
    w: np.ndarray,
    tol: float | None = None,
    w_star: np.ndarray | None = None,
) -> CriticalPointKind:
    """
    모집단 임계점 분류

    - global_max: ‖w‖ ≤ tol
    - global_min: ‖w ∓ w*‖ ≤ tol
    - strict_saddle: |‖w‖² − 1/3| ≤ tol 이고 |wᵀw*| ≤ tol
    - 그 외: not_critical

    Args:
        w: 판정할 점
        tol: 허용 오차 (기본 1e-8)
        w_star: 정답 벡터 (기본 e₁)
    """
    tol = settings.population.classify_tol if tol is None else tol
    if tol <= 0:
        raise ParameterError(f"tol 은 양수여야 합니다 (tol={tol})", details={"tol": tol})
    w, ws = _resolve(w, w_star)

    if np.linalg.norm(w) <= tol:
        return CriticalPointKind.GLOBAL_MAX
    if min(np.linalg.norm(w - ws), np.linalg.norm(w + ws)) <= tol:
        return CriticalPointKind.GLOBAL_MIN
    if abs(float(w @ w) - 1.0 / 3.0) <= tol and abs(float(w @ ws)) <= tol:
        return CriticalPointKind.STRICT_SADDLE
    return CriticalPointKind.NOT_CRITICAL
