"""시드 고정 가우시안 인스턴스 생성"""

import numpy as np
from loguru import logger

from phase_probe.landscape.models import Instance, WStarMode
from phase_probe.utils.exceptions import ParameterError

_MASK64 = (1 << 64) - 1


def seed_sequence(seed: int) -> np.random.SeedSequence:
    """64비트 시드 SeedSequence (음수는 2의 보수로 접음)"""
    return np.random.SeedSequence(int(seed) & _MASK64)


def make_rng(seed: int) -> np.random.Generator:
    """
    프로젝트 공통 난수 생성기

    PCG64 + SeedSequence (64비트 시드, 음수는 2의 보수로 접음).
    정규 난수는 numpy ziggurat standard_normal 을 사용합니다.
    """
    return np.random.Generator(np.random.PCG64(seed_sequence(seed)))


def random_unit_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    """S^{d-1} 위 균등 분포 (정규화된 가우시안)"""
    while True:
        v = rng.standard_normal(d)
        norm = float(np.linalg.norm(v))
        if norm > 0.0:
            return v / norm


def generate_instance(
    d: int,
    n: int,
    seed: int,
    w_star_mode: WStarMode = WStarMode.CANONICAL_E1,
) -> Instance:
    """
    가우시안 위상 복원 인스턴스 생성

    같은 (d, n, seed, mode) 는 항상 비트 단위로 같은 인스턴스를 만듭니다.
    표본을 먼저 뽑고, random_unit 모드일 때만 이어서 w* 를 뽑습니다.

    Args:
        d: 차원
        n: 표본 수
        seed: 64비트 시드
        w_star_mode: w* 생성 방식

    Returns:
        Instance

    Raises:
        ParameterError: d 또는 n 이 1 미만
    """
    if d < 1 or n < 1:
        raise ParameterError(f"d, n 은 1 이상이어야 합니다 (d={d}, n={n})", details={"d": d, "n": n})

    rng = make_rng(seed)
    samples = rng.standard_normal((n, d))

    if WStarMode(w_star_mode) == WStarMode.RANDOM_UNIT:
        w_star = random_unit_vector(rng, d)
        # 정규화 후 반올림 오차 한 번 더 제거
        w_star = w_star / np.linalg.norm(w_star)
        y_sq = (samples @ w_star) ** 2
    else:
        w_star = np.zeros(d)
        w_star[0] = 1.0
        y_sq = samples[:, 0] ** 2

    logger.debug(f"인스턴스 생성: d={d}, n={n}, seed={seed}, mode={w_star_mode}")
    return Instance(samples=samples, w_star=w_star, y_sq=y_sq, seed=seed)
