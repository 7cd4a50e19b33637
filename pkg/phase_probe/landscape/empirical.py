"""경험적 손실 지형: 손실, 기울기, 헤시안 이차형식/벡터곱, one-point 비율, (α, β) 분해

모든 연산은 O(nd) 이며 d×d 행렬을 만들지 않습니다. 표본 행렬은 행 우선으로
저장되어 있으므로 각 커널은 행을 순차적으로 읽습니다.
"""

import numpy as np

from phase_probe.config.settings import settings
from phase_probe.landscape.models import BETA_THRESHOLD, Instance, LandscapePoint
from phase_probe.utils.exceptions import (
    DegeneratePointError,
    DimensionMismatchError,
    IdentityCheckError,
    ParameterError,
)

# one-point 비율이 정의되는 최소 거리 ‖w − w*‖
DEGENERATE_DISTANCE = 1e-12

# 디버그 항등식 검사 상대 허용 오차
_IDENTITY_RTOL = 1e-9


# ── 내부 커널 ─────────────────────────────────────────────────────────────────


def as_vector(name: str, v: np.ndarray, d: int) -> np.ndarray:
    """길이 d 의 float64 벡터로 변환 (차원 불일치 시 예외)"""
    arr = np.asarray(v, dtype=np.float64)
    if arr.shape != (d,):
        actual = arr.shape[0] if arr.ndim == 1 else int(arr.size)
        raise DimensionMismatchError(name, expected=d, actual=actual)
    return arr


def project(samples: np.ndarray, v: np.ndarray) -> np.ndarray:
    """행별 내적 Xv (결정적 모드에서는 고정 순서 pairwise 합산)"""
    if settings.numerics.deterministic:
        return np.sum(samples * v, axis=1)
    return samples @ v


def combine(samples: np.ndarray, coef: np.ndarray) -> np.ndarray:
    """계수 가중 행 합 Σᵢ coefᵢ·xᵢ (결정적 모드에서는 고정 순서 합산)"""
    if settings.numerics.deterministic:
        return np.sum(samples * coef[:, None], axis=0)
    return coef @ samples


# ── 손실/기울기 ───────────────────────────────────────────────────────────────


def loss(inst: Instance, w: np.ndarray) -> float:
    """L(w) = (1/4n)·Σᵢ((wᵀxᵢ)² − yᵢ²)²"""
    w = as_vector("w", w, inst.d)
    residual = project(inst.samples, w) ** 2 - inst.y_sq
    return float(np.sum(residual**2) / (4.0 * inst.n))


def gradient(inst: Instance, w: np.ndarray) -> np.ndarray:
    """∇L(w) = (1/n)·Σᵢ((wᵀxᵢ)² − yᵢ²)·(wᵀxᵢ)·xᵢ"""
    w = as_vector("w", w, inst.d)
    z = project(inst.samples, w)
    return combine(inst.samples, (z**2 - inst.y_sq) * z) / inst.n


def hessian_vector_product(inst: Instance, w: np.ndarray, v: np.ndarray) -> np.ndarray:
    """∇²L(w)·v = (1/n)·Σᵢ(3(wᵀxᵢ)² − yᵢ²)·(xᵢᵀv)·xᵢ"""
    w = as_vector("w", w, inst.d)
    v = as_vector("v", v, inst.d)
    z = project(inst.samples, w)
    weights = 3.0 * z**2 - inst.y_sq
    return combine(inst.samples, weights * project(inst.samples, v)) / inst.n


def hessian_quadratic(inst: Instance, w: np.ndarray, u: np.ndarray) -> float:
    """uᵀ∇²L(w)u = (1/n)·Σᵢ(uᵀxᵢ)²·(3(wᵀxᵢ)² − yᵢ²)"""
    w = as_vector("w", w, inst.d)
    u = as_vector("u", u, inst.d)
    z = project(inst.samples, w)
    p = project(inst.samples, u)
    return float(np.sum(p**2 * (3.0 * z**2 - inst.y_sq)) / inst.n)


def curvature_weights(inst: Instance, w: np.ndarray) -> np.ndarray:
    """표본별 곡률 가중치 zᵢ = 3(wᵀxᵢ)² − yᵢ²"""
    w = as_vector("w", w, inst.d)
    return 3.0 * project(inst.samples, w) ** 2 - inst.y_sq


# ── one-point 비율 ────────────────────────────────────────────────────────────


def _delta(inst: Instance, w: np.ndarray) -> tuple[np.ndarray, float]:
    w = as_vector("w", w, inst.d)
    delta = w - inst.w_star
    dist_sq = float(delta @ delta)
    if np.sqrt(dist_sq) <= DEGENERATE_DISTANCE:
        raise DegeneratePointError(distance=float(np.sqrt(dist_sq)))
    return delta, dist_sq


def _quartic_terms(inst: Instance, delta: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """a = δᵀxᵢ, b = w*ᵀxᵢ, 그리고 전개식 합산항 a²(a+2b)(a+b)"""
    a = project(inst.samples, delta)
    b = project(inst.samples, inst.w_star)
    return a, b, a**2 * (a + 2.0 * b) * (a + b)


def onepoint_ratio_expanded(inst: Instance, w: np.ndarray) -> float:
    """전개식 (1/n)Σ(δᵀxᵢ)²(δᵀxᵢ+2w*ᵀxᵢ)(δᵀxᵢ+w*ᵀxᵢ) / ‖δ‖²"""
    delta, dist_sq = _delta(inst, w)
    _, _, terms = _quartic_terms(inst, delta)
    return float(np.sum(terms) / inst.n / dist_sq)


def onepoint_ratio(inst: Instance, w: np.ndarray) -> float:
    """
    one-point 강볼록 비율 ⟨∇L(w), w − w*⟩ / ‖w − w*‖²

    디버그 모드에서는 전개식과의 일치를 검사합니다.

    Raises:
        DegeneratePointError: ‖w − w*‖ ≤ 1e-12
        IdentityCheckError: 디버그 모드에서 두 계산이 불일치
    """
    delta, dist_sq = _delta(inst, w)
    direct = float(gradient(inst, w) @ delta / dist_sq)

    if settings.numerics.debug_checks:
        _, _, terms = _quartic_terms(inst, delta)
        expanded = float(np.sum(terms) / inst.n / dist_sq)
        scale = float(np.sum(np.abs(terms)) / inst.n / dist_sq)
        if abs(direct - expanded) > _IDENTITY_RTOL * (scale + abs(direct)):
            raise IdentityCheckError("onepoint_ratio", direct, expanded)

    return direct


# ── 탐침 목적함수 (값 + 기울기) ───────────────────────────────────────────────


def q_objective(inst: Instance, u: np.ndarray, w: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """
    q 탐침 목적함수 uᵀ∇²L(w)u 와 (u, w) 기울기

    Returns:
        (값, ∂/∂u = 2∇²L(w)u, ∂/∂w = (6/n)Σ(uᵀxᵢ)²(wᵀxᵢ)xᵢ)
    """
    w = as_vector("w", w, inst.d)
    u = as_vector("u", u, inst.d)
    z = project(inst.samples, w)
    p = project(inst.samples, u)
    weights = 3.0 * z**2 - inst.y_sq
    value = float(np.sum(p**2 * weights) / inst.n)
    grad_u = 2.0 * combine(inst.samples, p * weights) / inst.n
    grad_w = 6.0 * combine(inst.samples, p**2 * z) / inst.n
    return value, grad_u, grad_w


def onepoint_objective(inst: Instance, w: np.ndarray) -> tuple[float, np.ndarray]:
    """
    Q 탐침 목적함수 (전개식 one-point 비율) 와 기울기

    g(δ) = (1/n)Σ a⁴ + 3a³b + 2a²b², R = g/‖δ‖²,
    ∇R = ∇g/‖δ‖² − 2g·δ/‖δ‖⁴
    """
    delta, dist_sq = _delta(inst, w)
    a, b, terms = _quartic_terms(inst, delta)
    g = float(np.sum(terms) / inst.n)
    dg = combine(inst.samples, 4.0 * a**3 + 9.0 * a**2 * b + 4.0 * a * b**2) / inst.n
    value = g / dist_sq
    grad = dg / dist_sq - 2.0 * g * delta / dist_sq**2
    return value, grad


# ── 분해 ──────────────────────────────────────────────────────────────────────


def decompose(w: np.ndarray, w_star: np.ndarray) -> LandscapePoint:
    """
    w = α·w* + β·w⊥ 분해 및 국소 영역 R_loc 소속 여부

    Args:
        w: 파라미터 벡터
        w_star: 단위 노름 정답 벡터 (±1e-10)

    Returns:
        LandscapePoint (β ≤ 1e-12 이면 w_perp 없음)
    """
    w_star = np.asarray(w_star, dtype=np.float64)
    w = as_vector("w", w, w_star.shape[0])
    norm = float(np.linalg.norm(w_star))
    if abs(norm - 1.0) > 1e-10:
        raise ParameterError(f"‖w*‖ = {norm!r} 은(는) 단위 노름이 아닙니다", details={"norm": norm})

    alpha = float(w @ w_star)
    perp = w - alpha * w_star
    beta = float(np.linalg.norm(perp))
    w_perp = perp / beta if beta > BETA_THRESHOLD else None

    in_local_region = abs(alpha - 1.0) <= 1.0 / 3.0 and BETA_THRESHOLD < beta <= 1.0
    return LandscapePoint(
        w=w.copy(),
        alpha=alpha,
        beta=beta,
        w_perp=w_perp,
        delta=w - w_star,
        in_local_region=in_local_region,
    )
