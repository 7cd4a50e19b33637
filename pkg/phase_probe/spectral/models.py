"""고유값 추정 결과 모델"""

from dataclasses import dataclass
from enum import StrEnum

import numpy as np


class EigenMethod(StrEnum):
    """추정 방식"""

    DENSE = "dense"
    LANCZOS = "lanczos"
    POWER = "power"


@dataclass(frozen=True, eq=False)
class SpectralEstimate:
    """
    헤시안 최소 고유값 추정

    Attributes:
        lambda_min: 최소 고유값 (반환 고유벡터의 Rayleigh 몫)
        eigenvector: 단위 고유벡터
        residual: ‖Hv − λv‖
        iterations: 반복 횟수 (dense 는 1)
        converged: residual ≤ tol·(1 + |λ|) 여부
        method: 추정 방식
    """

    lambda_min: float
    eigenvector: np.ndarray
    residual: float
    iterations: int
    converged: bool
    method: EigenMethod
