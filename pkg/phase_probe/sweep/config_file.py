"""선언적 설정 파일 (key = value, # 주석)

dotenv 형식 파일을 pydantic-settings 로 읽어 타입 검증까지 마칩니다.
키는 CLI 플래그의 dest 이름입니다 (`d_grid`, `base_seed` ...). 대소문자는 구분하지 않습니다.

    # sweep.conf
    metric = Q
    d_grid = 256,512,1024
    schedule = 200:0.001,600:0.0003
"""

from pathlib import Path
from typing import Annotated, Any, Literal

from loguru import logger
from pydantic import Field, ValidationError, field_validator
from pydantic_settings import (
    BaseSettings,
    NoDecode,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    SettingsError,
)

from phase_probe.landscape.models import WStarMode
from phase_probe.optimize.models import PRESET_SCHEDULES, ScheduleSegment, parse_schedule
from phase_probe.sweep.models import SweepMetric
from phase_probe.utils.exceptions import ConfigError


class SweepFileSettings(BaseSettings):
    """
    설정 파일 값 (모든 필드 선택)

    지정하지 않은 키는 None 으로 남고 명령행 기본값을 건드리지 않습니다.
    모르는 키는 model_extra 로 모입니다.
    """

    model_config = SettingsConfigDict(
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="allow",
    )

    # 공통
    seed: int | None = None
    threads: int | None = Field(default=None, ge=1)
    deterministic: bool | None = None
    debug_checks: bool | None = None
    log_level: str | None = None
    out: str | None = None
    format: Literal["csv", "json"] | None = None

    # 인스턴스
    d: int | None = Field(default=None, ge=1)
    n: int | None = Field(default=None, ge=1)
    ratio: float | None = Field(default=None, gt=0)
    w_star_mode: WStarMode | None = None

    # 스윕
    metric: SweepMetric | None = None
    d_grid: Annotated[list[int] | None, NoDecode] = None
    ratios: Annotated[list[float] | None, NoDecode] = None
    seeds: int | None = Field(default=None, ge=1)
    base_seed: int | None = None
    r: float | None = Field(default=None, gt=0)
    r_lo: float | None = Field(default=None, gt=0)
    r_hi: float | None = Field(default=None, gt=0)
    num_points: int | None = Field(default=None, ge=1)
    eta: float | None = Field(default=None, gt=0)
    max_steps: int | None = Field(default=None, ge=0)
    start_distance: float | None = Field(default=None, gt=0)
    dist_tol: float | None = Field(default=None, gt=0)
    preset: str | None = None
    schedule: Annotated[list[ScheduleSegment] | None, NoDecode] = None
    json_out: str | None = None
    svg_out: str | None = None

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # 프로세스 환경변수는 읽지 않음 (Settings 가 PHASEPROBE_ 접두사로 담당)
        return init_settings, dotenv_settings

    @field_validator("d_grid", "ratios", mode="before")
    @classmethod
    def _split_dims(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        return value

    @field_validator("schedule", mode="before")
    @classmethod
    def _parse_schedule(cls, value: Any) -> Any:
        if isinstance(value, str):
            return parse_schedule(value)
        return value

    @field_validator("preset")
    @classmethod
    def _known_preset(cls, value: str | None) -> str | None:
        if value is not None and value not in PRESET_SCHEDULES:
            raise ValueError(f"알 수 없는 프리셋: {value} (가능: {sorted(PRESET_SCHEDULES)})")
        return value

    def flag_defaults(self) -> dict[str, Any]:
        """파일에 적힌 선언 필드만 {dest: 값} 으로"""
        return {name: value for name, value in self if name in type(self).model_fields and value is not None}


def load_config_file(path: Path) -> SweepFileSettings:
    """
    설정 파일 읽기 및 검증

    Raises:
        ConfigError: 파일이 없거나 읽을 수 없음, 또는 값 검증 실패
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"설정 파일을 찾을 수 없습니다: {path}", details={"path": str(path)})
    try:
        loaded = SweepFileSettings(_env_file=path)
    except ValidationError as exc:
        fields = [".".join(str(part) for part in err["loc"]) for err in exc.errors()]
        raise ConfigError(f"{path}: 잘못된 설정 값 ({', '.join(fields)})", details={"errors": exc.errors()}) from exc
    except (SettingsError, OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"설정 파일을 읽을 수 없습니다: {path}", details={"path": str(path)}) from exc

    for key in sorted(loaded.model_extra or {}):
        if key != "config":
            logger.warning(f"알 수 없는 설정 키 무시: {key}")
    return loaded
