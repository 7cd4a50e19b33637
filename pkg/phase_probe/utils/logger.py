"""로깅 설정 모듈 (loguru 기반 2중 출력: 콘솔 + 파일)"""

import sys
from pathlib import Path

from loguru import logger


def setup_logger(log_level: str = "INFO", log_dir: str = "logs", file_sink: bool = True) -> None:
    """
    로거 초기화 함수 - 진입점에서 1회 호출

    stdout 은 JSON 결과 출력 전용이므로 콘솔 sink 는 stderr 에 연결합니다.

    Args:
        log_level: 로그 레벨 (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_dir: 파일 로그 디렉토리
        file_sink: 파일 sink 활성화 여부
    """
    # 기존 핸들러 초기화
    logger.remove()

    # 1. 콘솔 출력 (컬러, 사람이 읽기 좋은 형식)
    logger.add(
        sys.stderr,
        level=log_level,
        format=(
            "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
            "<level>{level: <8}</level> | "
            "<cyan>{name}</cyan>:<cyan>{line}</cyan> | "
            "<level>{message}</level>"
        ),
        colorize=True,
    )

    # 2. 파일 출력 (일별 로테이션, 30일 보관)
    if file_sink:
        directory = Path(log_dir)
        directory.mkdir(parents=True, exist_ok=True)
        logger.add(
            directory / "phase_probe_{time:YYYY-MM-DD}.log",
            level=log_level,
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{line} | {message}",
            rotation="00:00",   # 자정에 새 파일 생성
            retention="30 days",
            encoding="utf-8",
        )

    logger.info(f"로거 초기화 완료 (레벨: {log_level}, 파일 sink: {file_sink})")
