"""테스트 보조 함수"""

from collections.abc import Callable

import numpy as np


def orthogonal_unit(rng: np.random.Generator, w_star: np.ndarray) -> np.ndarray:
    """w* 에 직교하는 단위 벡터"""
    v = rng.standard_normal(w_star.shape[0])
    v -= (v @ w_star) * w_star
    return v / np.linalg.norm(v)


def central_difference(fn: Callable[[np.ndarray], float], x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """스칼라 함수의 중앙 차분 기울기"""
    grad = np.empty_like(x)
    for i in range(x.shape[0]):
        step = np.zeros_like(x)
        step[i] = h
        grad[i] = (fn(x + step) - fn(x - step)) / (2.0 * h)
    return grad
