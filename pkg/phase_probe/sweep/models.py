"""스윕 설정 / 결과 레코드 / 집계 모델"""

from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, field_validator, model_validator

from phase_probe.landscape.models import WStarMode
from phase_probe.optimize.models import PRESET_SCHEDULES, AdamConfig, ScheduleSegment

# ── 열거형 ──────────────────────────────────────────────────────────────────


class SweepMetric(StrEnum):
    """스윕 셀에서 실행할 지표"""

    Q_HESSIAN = "q"
    Q_ONEPOINT = "Q"
    CERT_HESSIAN = "cert_hessian"
    CERT_ONEPOINT = "cert_onepoint"
    EIG_MIN = "eig_min"
    ANNULUS = "annulus"
    GD = "gd"


# 지표별 기본 최적화 프리셋
DEFAULT_PRESETS: dict[SweepMetric, str] = {
    SweepMetric.Q_HESSIAN: "fig2",
    SweepMetric.Q_ONEPOINT: "fig3",
}


# ── 설정 ──────────────────────────────────────────────────────────────────────


class SweepConfig(BaseModel):
    """
    (d, n/d, seed) 격자 스윕 설정

    n 을 지정하면 모든 d 에 같은 n 을, 아니면 비율 격자(ratios, 없으면 ratio)의
    각 비율마다 n = round(ratio·d) 를 씁니다. 같은 (d, seed_index) 셀은 비율과
    무관하게 같은 셀 시드를 씁니다.
    """

    metric: SweepMetric
    d_grid: list[int] = Field(min_length=1, description="차원 격자")
    ratio: float = Field(default=2.0, ge=1.0, description="n/d")
    ratios: list[float] | None = Field(default=None, min_length=1, description="n/d 격자 (ratio 대신)")
    n: int | None = Field(default=None, ge=1, description="고정 표본 수 (ratio 대신)")
    seeds: int = Field(default=10, ge=1, description="d 당 시드 수")
    base_seed: int = Field(default=0, description="셀 시드 파생 기준")
    w_star_mode: WStarMode = WStarMode.CANONICAL_E1

    # 탐침/검사 파라미터
    r: float = Field(default=0.1, gt=0, lt=2, description="q/Q 탐침 반경")
    r_lo: float = Field(default=0.15, gt=0, description="환형 내부 반경")
    r_hi: float = Field(default=0.3, gt=0, description="환형 외부 반경")
    num_points: int = Field(default=500, ge=1, description="환형 표본 점 수")
    eta: float = Field(default=0.1, gt=0, description="경사 하강 학습률")
    max_steps: int = Field(default=500, ge=0, description="경사 하강 최대 step")
    start_distance: float = Field(default=0.3, gt=0, description="경사 하강 초기 거리")
    dist_tol: float = Field(default=0.01, gt=0, description="경사 하강 정지 거리")

    # 최적화 스케줄 (schedule 이 있으면 preset 보다 우선)
    preset: str | None = None
    schedule: list[ScheduleSegment] | None = None

    # 출력 경로
    out_csv: Path | None = None
    out_json: Path | None = None
    out_svg: Path | None = None

    @field_validator("d_grid")
    @classmethod
    def _positive_dims(cls, value: list[int]) -> list[int]:
        if any(d < 1 for d in value):
            raise ValueError(f"차원은 1 이상이어야 합니다: {value}")
        return value

    @field_validator("ratios")
    @classmethod
    def _ratios_at_least_one(cls, value: list[float] | None) -> list[float] | None:
        if value is not None and any(ratio < 1.0 for ratio in value):
            raise ValueError(f"n/d 는 1 이상이어야 합니다: {value}")
        return value

    @field_validator("preset")
    @classmethod
    def _known_preset(cls, value: str | None) -> str | None:
        if value is not None and value not in PRESET_SCHEDULES:
            raise ValueError(f"알 수 없는 프리셋: {value} (가능: {sorted(PRESET_SCHEDULES)})")
        return value

    @model_validator(mode="after")
    def _check_grid(self) -> "SweepConfig":
        for d, n, _ in self.cells():
            if n < 1:
                raise ValueError(f"d={d} 에서 n 이 1 미만입니다")
        if self.r_lo > self.r_hi:
            raise ValueError(f"r_lo ≤ r_hi 이어야 합니다 (r_lo={self.r_lo}, r_hi={self.r_hi})")
        return self

    def ratio_grid(self) -> list[float]:
        """셀에 쓰는 n/d 목록 (고정 n 이면 ratio 하나)"""
        if self.n is not None or self.ratios is None:
            return [self.ratio]
        return list(self.ratios)

    def n_for(self, d: int, ratio: float | None = None) -> int:
        """차원 d (와 비율) 의 표본 수"""
        if self.n is not None:
            return self.n
        return int(round((self.ratio if ratio is None else ratio) * d))

    def adam_config(self) -> AdamConfig:
        if self.schedule is not None:
            return AdamConfig(schedule=self.schedule)
        return AdamConfig.preset(self.preset or DEFAULT_PRESETS.get(self.metric, "fig2"))

    def cells(self) -> list[tuple[int, int, int]]:
        """(d, n, seed_index) 셀 목록 (CSV 행 순서: d, 비율, 시드 순)"""
        return [
            (d, self.n_for(d, ratio), k)
            for d in self.d_grid
            for ratio in self.ratio_grid()
            for k in range(self.seeds)
        ]


# ── 결과 ──────────────────────────────────────────────────────────────────────


class SweepRecord(BaseModel):
    """
    셀 하나의 결과 (CSV 한 행)

    실패한 셀은 value 가 NaN 이고 extra["error"] 에 원인이 들어갑니다.
    """

    metric: str
    d: int
    n: int
    seed: int
    value: float
    wall_ms: float = 0.0
    extra: dict[str, Any] = Field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return "error" in self.extra


class AggregateRow(BaseModel):
    """(d, n) 별 집계 (실패 셀 제외)"""

    metric: str
    d: int
    n: int
    mean: float
    median: float
    std: float
    count: int

    @property
    def ratio(self) -> float:
        return self.n / self.d


@dataclass
class SweepResult:
    """스윕 실행 결과"""

    records: list[SweepRecord]
    aggregates: list[AggregateRow]
    failed: int = 0
    outputs: dict[str, Path] = field(default_factory=dict)
