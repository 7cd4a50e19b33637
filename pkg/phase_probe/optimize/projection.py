"""제약 집합 사영 (단위 구면, 공, 구면, 환형, 곱 사영)"""

from abc import ABC, abstractmethod

import numpy as np

from phase_probe.utils.exceptions import DegenerateDirectionError, ParameterError

# 방향이 정의되는 최소 거리
_MIN_DIRECTION_NORM = 1e-300


def _direction(v: np.ndarray, center: np.ndarray | None) -> tuple[np.ndarray, float]:
    offset = v if center is None else v - center
    norm = float(np.linalg.norm(offset))
    if norm <= _MIN_DIRECTION_NORM:
        raise DegenerateDirectionError(
            "중심과 일치하는 점은 구면으로 사영할 수 없습니다",
            details={"norm": norm},
        )
    return offset, norm


def project_unit_sphere(v: np.ndarray) -> np.ndarray:
    """v / ‖v‖"""
    offset, norm = _direction(np.asarray(v, dtype=np.float64), None)
    return offset / norm


def project_ball(w: np.ndarray, center: np.ndarray, r: float) -> np.ndarray:
    """‖w − c‖ ≤ r 이면 그대로, 아니면 c + r·(w−c)/‖w−c‖"""
    w = np.asarray(w, dtype=np.float64)
    offset = w - center
    norm = float(np.linalg.norm(offset))
    if norm <= r:
        return w.copy()
    return center + r * offset / norm


def project_sphere(w: np.ndarray, center: np.ndarray, r: float) -> np.ndarray:
    """항상 c + r·(w−c)/‖w−c‖"""
    offset, norm = _direction(np.asarray(w, dtype=np.float64), center)
    return center + r * offset / norm


class Projection(ABC):
    """제약 집합 사영 추상 클래스 (두 번 적용 = 한 번 적용)"""

    @abstractmethod
    def __call__(self, v: np.ndarray) -> np.ndarray:
        """v 를 제약 집합으로 사영"""
        ...

    @abstractmethod
    def contains(self, v: np.ndarray, tol: float = 1e-10) -> bool:
        """v 가 허용 오차 내에서 제약을 만족하는지"""
        ...


class UnitSphere(Projection):
    """S^{d-1}"""

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return project_unit_sphere(v)

    def contains(self, v: np.ndarray, tol: float = 1e-10) -> bool:
        return abs(float(np.linalg.norm(v)) - 1.0) <= tol


class BallAround(Projection):
    """{w : ‖w − c‖ ≤ r}"""

    def __init__(self, center: np.ndarray, radius: float) -> None:
        if radius <= 0:
            raise ParameterError(f"반경은 양수여야 합니다 (r={radius})", details={"radius": radius})
        self.center = np.asarray(center, dtype=np.float64)
        self.radius = radius

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return project_ball(v, self.center, self.radius)

    def contains(self, v: np.ndarray, tol: float = 1e-10) -> bool:
        return float(np.linalg.norm(v - self.center)) <= self.radius + tol


class SphereAround(Projection):
    """{w : ‖w − c‖ = r}"""

    def __init__(self, center: np.ndarray, radius: float) -> None:
        if radius <= 0:
            raise ParameterError(f"반경은 양수여야 합니다 (r={radius})", details={"radius": radius})
        self.center = np.asarray(center, dtype=np.float64)
        self.radius = radius

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return project_sphere(v, self.center, self.radius)

    def contains(self, v: np.ndarray, tol: float = 1e-10) -> bool:
        return abs(float(np.linalg.norm(v - self.center)) - self.radius) <= tol


class AnnulusAround(Projection):
    """{w : r_lo ≤ ‖w − c‖ ≤ r_hi} (Q 탐침의 퇴화점 배제용)"""

    def __init__(self, center: np.ndarray, r_lo: float, r_hi: float) -> None:
        if not 0 < r_lo <= r_hi:
            raise ParameterError(
                f"0 < r_lo ≤ r_hi 이어야 합니다 (r_lo={r_lo}, r_hi={r_hi})",
                details={"r_lo": r_lo, "r_hi": r_hi},
            )
        self.center = np.asarray(center, dtype=np.float64)
        self.r_lo = r_lo
        self.r_hi = r_hi

    def __call__(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        offset, norm = _direction(v, self.center)
        if norm > self.r_hi:
            return self.center + self.r_hi * offset / norm
        if norm < self.r_lo:
            return self.center + self.r_lo * offset / norm
        return v.copy()

    def contains(self, v: np.ndarray, tol: float = 1e-10) -> bool:
        norm = float(np.linalg.norm(v - self.center))
        return self.r_lo - tol <= norm <= self.r_hi + tol


class ProductProjection(Projection):
    """
    연결 변수 (u, w, ...) 의 블록별 사영

    Args:
        parts: (사영, 블록 크기) 목록, 연결 순서대로
    """

    def __init__(self, parts: list[tuple[Projection, int]]) -> None:
        if not parts:
            raise ParameterError("곱 사영에는 최소 한 개의 블록이 필요합니다")
        self.parts = parts
        self._bounds = np.cumsum([0] + [size for _, size in parts])

    @property
    def size(self) -> int:
        return int(self._bounds[-1])

    def split(self, v: np.ndarray) -> list[np.ndarray]:
        """연결 벡터를 블록 목록으로 분리"""
        if v.shape != (self.size,):
            raise ParameterError(
                f"연결 변수 길이 불일치: 기대 {self.size}, 실제 {v.shape}",
                details={"expected": self.size},
            )
        return [v[self._bounds[i] : self._bounds[i + 1]] for i in range(len(self.parts))]

    def __call__(self, v: np.ndarray) -> np.ndarray:
        blocks = self.split(np.asarray(v, dtype=np.float64))
        return np.concatenate([proj(block) for (proj, _), block in zip(self.parts, blocks, strict=True)])

    def contains(self, v: np.ndarray, tol: float = 1e-10) -> bool:
        blocks = self.split(np.asarray(v, dtype=np.float64))
        return all(proj.contains(block, tol) for (proj, _), block in zip(self.parts, blocks, strict=True))
