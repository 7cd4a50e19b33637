"""최적화 설정 및 궤적 모델"""

from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator

from phase_probe.utils.exceptions import ConfigError


class ScheduleSegment(BaseModel):
    """학습률 스케줄 구간"""

    steps: int = Field(gt=0, description="구간 step 수")
    learning_rate: float = Field(gt=0, description="구간 학습률")


class AdamConfig(BaseModel):
    """
    Adam 하이퍼파라미터

    bias correction 은 항상 적용됩니다.
    """

    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    epsilon: float = Field(default=1e-8, gt=0)
    schedule: list[ScheduleSegment] = Field(min_length=1, description="(step 수, 학습률) 구간 목록")

    @field_validator("schedule", mode="before")
    @classmethod
    def _coerce_pairs(cls, value: object) -> object:
        """(steps, lr) 튜플 목록도 허용"""
        if isinstance(value, list):
            return [
                {"steps": item[0], "learning_rate": item[1]} if isinstance(item, tuple | list) else item
                for item in value
            ]
        return value

    @property
    def total_steps(self) -> int:
        """전체 step 수 (구간 합)"""
        return sum(segment.steps for segment in self.schedule)

    def learning_rates(self) -> np.ndarray:
        """step 별 학습률 배열"""
        return np.concatenate(
            [np.full(segment.steps, segment.learning_rate) for segment in self.schedule]
        )

    @classmethod
    def preset(cls, name: str) -> "AdamConfig":
        """
        이름 있는 프리셋

        - fig2: 0.001×200, 0.0005×200, 0.0003×600 (q 탐침)
        - fig3: 0.01×3000 (Q 탐침)
        """
        try:
            schedule = PRESET_SCHEDULES[name]
        except KeyError as exc:
            raise ConfigError(
                f"알 수 없는 최적화 프리셋: {name}",
                details={"name": name, "available": sorted(PRESET_SCHEDULES)},
            ) from exc
        return cls(schedule=list(schedule))


PRESET_SCHEDULES: dict[str, list[tuple[int, float]]] = {
    "fig2": [(200, 0.001), (200, 0.0005), (600, 0.0003)],
    "fig3": [(3000, 0.01)],
}


def parse_schedule(text: str) -> list[ScheduleSegment]:
    """
    "steps:lr,steps:lr" 형식 스케줄 문자열 파싱

    예: "200:0.001,600:0.0003"

    Raises:
        ValueError: 형식이 잘못되었거나 step/학습률이 양수가 아닌 구간
    """
    segments: list[ScheduleSegment] = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        steps, sep, rate = item.partition(":")
        if not sep:
            raise ValueError(f"'steps:lr' 형식이 아닙니다: {item}")
        try:
            segments.append(ScheduleSegment(steps=int(steps), learning_rate=float(rate)))
        except ValidationError as exc:
            raise ValueError(f"잘못된 스케줄 구간: {item}") from exc
    if not segments:
        raise ValueError(f"빈 스케줄입니다: {text!r}")
    return segments


@dataclass
class Trace:
    """
    최적화/적분 궤적

    Attributes:
        values: step 별 목적함수 값 (초기값 포함, 길이 = steps + 1)
        final: 마지막 반복점
        steps: 실행한 step 수
        wall_time: 경과 시간 (초)
        best_value: 궤적 최솟값
        best_iterate: 최솟값을 낸 반복점
        distances: step 별 거리 지표 (경사 하강: ‖w−w*‖, 흐름: ‖w−w*‖²)
        iterates: 반복점 기록 (요청 시)
        seed: 실행 시드
    """

    values: np.ndarray
    final: np.ndarray
    steps: int
    wall_time: float
    best_value: float
    best_iterate: np.ndarray
    distances: np.ndarray | None = None
    iterates: list[np.ndarray] = field(default_factory=list)
    seed: int | None = None

    @property
    def is_monotone(self) -> bool:
        """목적함수 값이 단조 비증가인지"""
        diffs = np.diff(self.values)
        return bool(np.all(diffs <= 1e-12 * (1.0 + np.abs(self.values[:-1]))))
