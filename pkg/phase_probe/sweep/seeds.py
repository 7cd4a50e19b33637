"""셀 시드 파생 (splitmix64)

cell_seed = mix(mix(mix(base_seed) ⊕ d) ⊕ seed_index) 의 하위 63비트.
seed_index 만 입력으로 쓰므로 시드 수를 늘려도 기존 셀 시드는 바뀌지 않습니다.
"""

_MASK64 = (1 << 64) - 1
_MASK63 = (1 << 63) - 1


def splitmix64(x: int) -> int:
    """splitmix64 한 단계 (64비트 정수 → 64비트 정수)"""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_cell_seed(base_seed: int, d: int, seed_index: int) -> int:
    """(base_seed, d, seed_index) → 음이 아닌 63비트 셀 시드"""
    state = splitmix64(int(base_seed) & _MASK64)
    state = splitmix64(state ^ (int(d) & _MASK64))
    state = splitmix64(state ^ (int(seed_index) & _MASK64))
    return state & _MASK63
