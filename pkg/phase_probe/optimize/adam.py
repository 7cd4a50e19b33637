"""사영 Adam (매 step 후 제약 집합으로 사영)"""

import time
from collections.abc import Callable

import numpy as np
from loguru import logger

from phase_probe.optimize.models import AdamConfig, Trace
from phase_probe.optimize.projection import Projection
from phase_probe.utils.exceptions import OptimizerAbortError

Objective = Callable[[np.ndarray], tuple[float, np.ndarray]]

# 디버그 로그 간격 (step)
_LOG_EVERY = 500


def _check_finite(step: int, value: float, grad: np.ndarray) -> None:
    if not np.isfinite(value):
        raise OptimizerAbortError(step, f"비유한 목적함수 값 {value!r}")
    if not np.all(np.isfinite(grad)):
        raise OptimizerAbortError(step, "비유한 기울기")


def projected_adam(
    objective: Objective,
    init: np.ndarray,
    cfg: AdamConfig,
    proj: Projection,
    seed: int | None = None,
) -> Trace:
    """
    사영 Adam 최소화

    표준 Adam 갱신 (bias correction 포함) 후 사영을 적용합니다.
    초기점은 먼저 사영됩니다. (init, cfg) 가 같으면 궤적은 비트 단위로 같습니다.

    Args:
        objective: 현재 반복점에서 (값, 기울기) 를 반환하는 함수
        init: 초기점 (연결 변수 가능)
        cfg: Adam 설정
        proj: 제약 사영
        seed: 궤적에 기록할 실행 시드

    Returns:
        Trace (values 길이 = 전체 step + 1, best_* 는 궤적 최솟값)

    Raises:
        OptimizerAbortError: 목적함수나 기울기가 유한하지 않음
    """
    started = time.perf_counter()
    total = cfg.total_steps
    lrs = cfg.learning_rates()

    v = proj(np.asarray(init, dtype=np.float64))
    m = np.zeros_like(v)
    s = np.zeros_like(v)
    values = np.empty(total + 1)
    best_value = np.inf
    best_iterate = v.copy()

    logger.debug(f"사영 Adam 시작: dim={v.shape[0]}, steps={total}, seed={seed}")

    for step in range(total):
        value, grad = objective(v)
        _check_finite(step, value, grad)
        values[step] = value
        if value < best_value:
            best_value, best_iterate = value, v.copy()

        m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad
        s = cfg.beta2 * s + (1.0 - cfg.beta2) * grad**2
        m_hat = m / (1.0 - cfg.beta1 ** (step + 1))
        s_hat = s / (1.0 - cfg.beta2 ** (step + 1))
        v = proj(v - lrs[step] * m_hat / (np.sqrt(s_hat) + cfg.epsilon))

        if step % _LOG_EVERY == 0:
            logger.debug(f"Adam step {step}: value={value:.6g}, lr={lrs[step]:g}")

    value, grad = objective(v)
    _check_finite(total, value, grad)
    values[total] = value
    if value < best_value:
        best_value, best_iterate = value, v.copy()

    elapsed = time.perf_counter() - started
    logger.debug(f"사영 Adam 완료: best={best_value:.6g}, final={value:.6g}, {elapsed:.2f}초")
    return Trace(
        values=values,
        final=v,
        steps=total,
        wall_time=elapsed,
        best_value=float(best_value),
        best_iterate=best_iterate,
        seed=seed,
    )
