"""몬테카를로 배치 난수 생성

배치마다 SeedSequence.spawn 으로 파생한 독립 생성기를 씁니다. 배치 크기는
시행당 원소 수로 정해지므로 같은 (seed, trials, 시행당 원소 수) 는 같은 결과를
냅니다. 집계는 항상 배치 순서대로 합니다.
"""

from collections.abc import Iterator

import numpy as np

from phase_probe.landscape.instance import seed_sequence

# 배치당 최대 난수 원소 수
BATCH_ELEMENTS = 1 << 21

# 기준 표본 생성기 엔트로피 태그
_REFERENCE_TAG = 0x5EED


def batched_generators(trials: int, per_trial: int, seed: int) -> Iterator[tuple[np.random.Generator, int]]:
    """(생성기, 배치 시행 수) 를 배치 순서대로 생성"""
    size = max(1, BATCH_ELEMENTS // max(1, per_trial))
    count = -(-trials // size)
    for i, child in enumerate(seed_sequence(seed).spawn(count)):
        yield np.random.Generator(np.random.PCG64(child)), min(size, trials - i * size)


def reference_generator(seed: int) -> np.random.Generator:
    """KS 기준 표본용 생성기 (배치 생성기와 독립)"""
    entropy = [int(seed) & ((1 << 64) - 1), _REFERENCE_TAG]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
