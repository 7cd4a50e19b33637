"""문제 인스턴스 및 지형 점 모델"""

from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from phase_probe.config.settings import settings
from phase_probe.utils.exceptions import ParameterError

# w* 단위 노름 허용 오차
UNIT_NORM_TOL = 1e-12

# β 가 이 값 이하이면 "w* 에 평행" 으로 취급
BETA_THRESHOLD = 1e-12


class WStarMode(StrEnum):
    """정답 벡터 w* 생성 방식"""

    CANONICAL_E1 = "canonical_e1"   # 첫 번째 표준 기저
    RANDOM_UNIT = "random_unit"     # 정규화된 가우시안


@dataclass(frozen=True, eq=False)
class Instance:
    """
    생성된 위상 복원 문제 인스턴스 (생성 후 불변)

    Attributes:
        samples: n×d 표본 행렬 (행 i = xᵢ, 행 우선 저장)
        w_star: 단위 노름 정답 벡터
        y_sq: 제곱 레이블, y_sq[i] = (w*ᵀxᵢ)²
        seed: 생성 시드 (직접 구성한 경우 None)
    """

    samples: np.ndarray
    w_star: np.ndarray
    y_sq: np.ndarray
    seed: int | None = None

    def __post_init__(self) -> None:
        # 호출자 배열과 분리된 float64 C-연속 사본만 보관
        for name in ("samples", "w_star", "y_sq"):
            object.__setattr__(self, name, np.array(getattr(self, name), dtype=np.float64, order="C", copy=True))

        if self.samples.ndim != 2:
            raise ParameterError("samples 는 n×d 행렬이어야 합니다", details={"shape": self.samples.shape})
        n, d = self.samples.shape
        if n < 1 or d < 1:
            raise ParameterError(f"n, d 는 1 이상이어야 합니다 (n={n}, d={d})", details={"n": n, "d": d})
        if self.w_star.shape != (d,) or self.y_sq.shape != (n,):
            raise ParameterError(
                "w_star / y_sq 형상이 samples 와 맞지 않습니다",
                details={"w_star": self.w_star.shape, "y_sq": self.y_sq.shape},
            )
        norm = float(np.linalg.norm(self.w_star))
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise ParameterError(f"‖w*‖ = {norm!r} 은(는) 단위 노름이 아닙니다", details={"norm": norm})
        if settings.numerics.debug_checks:
            expected = (self.samples @ self.w_star) ** 2
            if not np.allclose(self.y_sq, expected, rtol=1e-10, atol=1e-12):
                worst = int(np.argmax(np.abs(self.y_sq - expected)))
                raise ParameterError(
                    "y_sq 가 (w*ᵀxᵢ)² 와 일치하지 않습니다",
                    details={"index": worst, "y_sq": float(self.y_sq[worst]), "expected": float(expected[worst])},
                )

        # 공유 시 변경 방지
        for array in (self.samples, self.w_star, self.y_sq):
            array.flags.writeable = False

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def d(self) -> int:
        return self.samples.shape[1]

    @classmethod
    def from_arrays(cls, samples: np.ndarray, w_star: np.ndarray, seed: int | None = None) -> "Instance":
        """
        명시적 배열로 인스턴스 구성 (y_sq 는 계산됨)

        Args:
            samples: n×d 표본 행렬
            w_star: 단위 노름 정답 벡터
            seed: 기록용 시드

        Returns:
            검증된 Instance
        """
        x = np.asarray(samples, dtype=np.float64)
        if x.ndim == 1:
            x = x.reshape(1, -1)
        ws = np.array(w_star, dtype=np.float64)
        y_sq = (x @ ws) ** 2
        return cls(samples=x, w_star=ws, y_sq=y_sq, seed=seed)


@dataclass(frozen=True, eq=False)
class LandscapePoint:
    """
    w* 기준 (α, β, w⊥) 분해

    Attributes:
        w: 파라미터 벡터
        alpha: ⟨w, w*⟩
        beta: ‖(I − w*w*ᵀ)w‖
        w_perp: 직교 성분 방향 (beta > 1e-12 일 때만)
        delta: w − w*
        in_local_region: |α − 1| ≤ 1/3 이고 0 < β ≤ 1
    """

    w: np.ndarray
    alpha: float
    beta: float
    w_perp: np.ndarray | None
    delta: np.ndarray
    in_local_region: bool

    def reconstruct(self, w_star: np.ndarray) -> np.ndarray:
        """α·w* + β·w⊥ 재구성"""
        if self.w_perp is None:
            return self.alpha * w_star
        return self.alpha * w_star + self.beta * self.w_perp
