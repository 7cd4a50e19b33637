"""경사 하강 및 경사 흐름 적분기"""

import time
from collections.abc import Callable
from enum import StrEnum

import numpy as np
from loguru import logger

from phase_probe.landscape.empirical import as_vector, gradient, loss
from phase_probe.landscape.models import Instance
from phase_probe.landscape.population import pop_gradient, pop_loss
from phase_probe.optimize.models import Trace
from phase_probe.utils.exceptions import DivergenceError, NonFiniteStateError, ParameterError

# 이 손실을 넘으면 발산으로 판정
DIVERGENCE_LOSS = 1e12


class FlowField(StrEnum):
    """경사 흐름 벡터장"""

    EMPIRICAL = "empirical"
    POPULATION = "population"


class FlowMethod(StrEnum):
    """적분 방식"""

    EULER = "euler"
    RK4 = "rk4"


def gradient_descent(
    inst: Instance,
    w0: np.ndarray,
    eta: float,
    max_steps: int,
    dist_tol: float,
) -> Trace:
    """
    경험적 손실의 전체 배치 경사 하강 w_{t+1} = w_t − η∇L(w_t)

    max_steps 에 도달하거나 ‖w_t − w*‖ ≤ dist_tol 이면 멈춥니다.

    Args:
        inst: 문제 인스턴스
        w0: 초기점
        eta: 학습률 (양수)
        max_steps: 최대 step 수
        dist_tol: 정지 거리

    Returns:
        Trace (values = 손실, distances = ‖w_t − w*‖)

    Raises:
        DivergenceError: 손실이 1e12 를 넘거나 유한하지 않음
    """
    if eta <= 0:
        raise ParameterError(f"eta 는 양수여야 합니다 (eta={eta})", details={"eta": eta})
    if max_steps < 0:
        raise ParameterError(f"max_steps 는 0 이상이어야 합니다 (max_steps={max_steps})")

    started = time.perf_counter()
    w = as_vector("w0", w0, inst.d).copy()
    values: list[float] = []
    distances: list[float] = []
    best_value, best_iterate = np.inf, w.copy()

    for step in range(max_steps + 1):
        value = loss(inst, w)
        if not np.isfinite(value) or value > DIVERGENCE_LOSS:
            raise DivergenceError(step, value)
        dist = float(np.linalg.norm(w - inst.w_star))
        values.append(value)
        distances.append(dist)
        if value < best_value:
            best_value, best_iterate = value, w.copy()
        if dist <= dist_tol or step == max_steps:
            break
        w = w - eta * gradient(inst, w)

    elapsed = time.perf_counter() - started
    logger.debug(f"경사 하강 종료: steps={len(values) - 1}, 거리={distances[-1]:.3e}")
    return Trace(
        values=np.array(values),
        final=w,
        steps=len(values) - 1,
        wall_time=elapsed,
        best_value=float(best_value),
        best_iterate=best_iterate,
        distances=np.array(distances),
    )


def _field_functions(
    field: FlowField,
    inst: Instance | None,
    w_star: np.ndarray,
) -> tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], float]]:
    if FlowField(field) == FlowField.EMPIRICAL:
        if inst is None:
            raise ParameterError("empirical 흐름에는 인스턴스가 필요합니다")
        return (lambda w: gradient(inst, w)), (lambda w: loss(inst, w))
    return (lambda w: pop_gradient(w, w_star)), (lambda w: pop_loss(w, w_star))


def gradient_flow(
    w0: np.ndarray,
    dt: float,
    T: float,
    field: FlowField = FlowField.POPULATION,
    method: FlowMethod = FlowMethod.RK4,
    inst: Instance | None = None,
    w_star: np.ndarray | None = None,
    record_iterates: bool = False,
) -> Trace:
    """
    경사 흐름 ẇ = −∇L(w) 적분

    Args:
        w0: 초기점
        dt: 시간 간격 (양수)
        T: 적분 구간 (T ≥ dt)
        field: empirical(inst) 또는 population
        method: euler 또는 rk4
        inst: empirical 흐름의 인스턴스 (population 흐름이면 w* 제공용으로만 사용)
        w_star: population 흐름의 정답 벡터 (기본: inst.w_star, 그 다음 e₁)
        record_iterates: 반복점 기록 여부

    Returns:
        Trace (values = 손실, distances = ‖w_t − w*‖²)

    Raises:
        NonFiniteStateError: 상태가 유한하지 않음
    """
    if dt <= 0 or T < dt:
        raise ParameterError(f"dt > 0, T ≥ dt 이어야 합니다 (dt={dt}, T={T})", details={"dt": dt, "T": T})

    w = np.array(w0, dtype=np.float64)
    if w_star is None:
        if inst is not None:
            w_star = inst.w_star
        else:
            w_star = np.zeros(w.shape[0])
            w_star[0] = 1.0
    w_star = as_vector("w_star", w_star, w.shape[0])
    grad_fn, loss_fn = _field_functions(field, inst, w_star)
    steps = int(round(T / dt))

    def rhs(x: np.ndarray) -> np.ndarray:
        return -grad_fn(x)

    started = time.perf_counter()
    values = np.empty(steps + 1)
    distances = np.empty(steps + 1)
    iterates: list[np.ndarray] = []
    best_value, best_iterate = np.inf, w.copy()

    for step in range(steps + 1):
        if not np.all(np.isfinite(w)):
            raise NonFiniteStateError(step)
        values[step] = loss_fn(w)
        if values[step] < best_value:
            best_value, best_iterate = float(values[step]), w.copy()
        distances[step] = float(np.sum((w - w_star) ** 2))
        if record_iterates:
            iterates.append(w.copy())
        if step == steps:
            break
        if FlowMethod(method) == FlowMethod.EULER:
            w = w + dt * rhs(w)
        else:
            k1 = rhs(w)
            k2 = rhs(w + 0.5 * dt * k1)
            k3 = rhs(w + 0.5 * dt * k2)
            k4 = rhs(w + dt * k3)
            w = w + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    elapsed = time.perf_counter() - started
    logger.debug(f"경사 흐름 종료: field={field}, method={method}, steps={steps}, ‖δ‖²={distances[-1]:.3e}")
    return Trace(
        values=values,
        final=w,
        steps=steps,
        wall_time=elapsed,
        best_value=best_value,
        best_iterate=best_iterate,
        distances=distances,
        iterates=iterates,
    )


def contraction_slope(trace: Trace, dt: float) -> float:
    """
    log‖w_t − w*‖² 의 최소제곱 기울기 (흐름 궤적용)

    거리가 0 인 점은 제외합니다.
    """
    if trace.distances is None:
        raise ParameterError("거리 기록이 없는 궤적입니다")
    times = dt * np.arange(trace.distances.shape[0])
    mask = trace.distances > 0
    if int(np.count_nonzero(mask)) < 2:
        raise ParameterError("기울기를 구할 거리 기록이 부족합니다")
    slope, _ = np.polyfit(times[mask], np.log(trace.distances[mask]), 1)
    return float(slope)
