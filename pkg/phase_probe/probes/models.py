"""탐침 결과 및 증명서 모델"""

from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from phase_probe.optimize.models import Trace


class ProbeMetric(StrEnum):
    """탐침 지표"""

    HESSIAN = "q"    # min uᵀ∇²L(w)u
    ONEPOINT = "Q"   # min one-point 비율


class CertificateKind(StrEnum):
    """폐형식 적대적 증명서 종류"""

    HESSIAN_THM23 = "hessian_thm23"
    HESSIAN_THM21 = "hessian_thm21"
    ONEPOINT_THM33 = "onepoint_thm33"


@dataclass(frozen=True, eq=False)
class ProbeResult:
    """
    지형 탐침 결과

    Attributes:
        metric: q 또는 Q
        r: 탐침 반경
        final_value: 궤적 최솟값 (argmin 에서 재평가한 값과 일치)
        u: 최소화 방향 (q 탐침만)
        w: 최소화 점
        trace: 최적화 궤적
        seed: 초기화 시드
    """

    metric: ProbeMetric
    r: float
    final_value: float
    u: np.ndarray | None
    w: np.ndarray
    trace: Trace
    seed: int


@dataclass(frozen=True, eq=False)
class Certificate:
    """
    극단 표본 인덱스 J 로 만든 폐형식 증명서

    Attributes:
        kind: 증명서 종류
        index: 선택된 표본 인덱스 J (동률 시 가장 작은 인덱스)
        w: 구성된 점
        value: 구성된 점에서의 값 (헤시안 이차형식 또는 one-point 비율)
        delta_norm: ‖w − w*‖
        u: 구성된 방향 (헤시안 증명서)
        extra: 보조 통계
    """

    kind: CertificateKind
    index: int
    w: np.ndarray
    value: float
    delta_norm: float
    u: np.ndarray | None = None
    extra: dict[str, float | int] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class AnnulusCheck:
    """환형 영역 one-point 비율 최솟값 검사 결과"""

    min_ratio: float
    argmin_w: np.ndarray
    r_lo: float
    r_hi: float
    ratios: np.ndarray


@dataclass(frozen=True, eq=False)
class TruncationSplit:
    """
    |w*ᵀxᵢ| 임계값 t 기준 표본 분할

    Attributes:
        t: 임계값
        leq: |w*ᵀxᵢ| ≤ t 인 인덱스
        geq: |w*ᵀxᵢ| > t 인 인덱스
        tail_term: (64/n)·Σ_{i∈geq}(w*ᵀxᵢ)⁴
        tail_se: tail_term 의 몬테카를로 표준오차
    """

    t: float
    leq: np.ndarray
    geq: np.ndarray
    tail_term: float
    tail_se: float
