"""중앙 설정 관리 모듈 (pydantic-settings 기반)"""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class LogSettings(BaseSettings):
    """로깅 설정"""

    level: str = Field(default="INFO", description="로그 레벨")
    directory: str = Field(default="logs", description="파일 로그 디렉토리")
    file_sink: bool = Field(default=True, description="파일 로그 활성화 여부")


class NumericsSettings(BaseSettings):
    """수치 계산 설정"""

    deterministic: bool = Field(
        default=False,
        description="고정 순서 합산 강제 (BLAS 대신 numpy pairwise 합산, 비트 재현성)",
    )
    debug_checks: bool = Field(
        default=False,
        description="직접 계산 vs 전개식 항등식 검사 (릴리스 스윕에서는 비활성)",
    )


class SpectralSettings(BaseSettings):
    """고유값 추정 설정"""

    dense_cap: int = Field(default=2048, description="조밀 헤시안 최대 차원")
    max_iters: int = Field(default=400, description="Lanczos 최대 반복 (완전 재직교화 벡터 수 상한)")
    tol: float = Field(default=1e-8, description="잔차 허용 오차")
    norm_iters: int = Field(default=50, description="스펙트럼 노름 상계 power iteration 횟수")
    shift_factor: float = Field(default=1.2, description="스펙트럼 노름 상계 배율")


class PopulationSettings(BaseSettings):
    """모집단 지형 설정"""

    dense_cap: int = Field(default=4096, description="조밀 모집단 헤시안 최대 차원")
    classify_tol: float = Field(default=1e-8, description="임계점 분류 허용 오차")


class Settings(BaseSettings):
    """루트 설정 클래스 - 환경변수 중첩 설정 자동 매핑 (접두사 PHASEPROBE_)"""

    model_config = SettingsConfigDict(
        env_prefix="PHASEPROBE_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        case_sensitive=False,
        extra="ignore",
    )

    threads: int = Field(default=1, ge=1, description="스윕 워커 수 (--threads 미지정 시)")
    log: LogSettings = Field(default_factory=LogSettings)
    numerics: NumericsSettings = Field(default_factory=NumericsSettings)
    spectral: SpectralSettings = Field(default_factory=SpectralSettings)
    population: PopulationSettings = Field(default_factory=PopulationSettings)


# 모듈 임포트 시 싱글톤 인스턴스 생성
settings = Settings()
