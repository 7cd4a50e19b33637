"""공통 테스트 픽스처"""

import numpy as np
import pytest

from phase_probe.config.settings import settings
from phase_probe.landscape.instance import generate_instance
from phase_probe.landscape.models import Instance, WStarMode


@pytest.fixture(autouse=True)
def _isolated_settings(monkeypatch: pytest.MonkeyPatch) -> None:
    """테스트마다 파일 로그를 끄고 수치 플래그를 기본값으로 되돌림"""
    monkeypatch.setattr(settings.log, "file_sink", False)
    monkeypatch.setattr(settings.numerics, "deterministic", False)
    monkeypatch.setattr(settings.numerics, "debug_checks", False)
    monkeypatch.setattr(settings, "threads", 1)


@pytest.fixture
def small_instance() -> Instance:
    return generate_instance(8, 40, seed=1)


@pytest.fixture
def random_instance() -> Instance:
    """random_unit w* 인스턴스"""
    return generate_instance(6, 30, seed=2, w_star_mode=WStarMode.RANDOM_UNIT)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)

