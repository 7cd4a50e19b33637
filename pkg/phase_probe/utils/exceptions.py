"""위상 복원 탐침 툴킷 커스텀 예외 계층"""


class PhaseProbeError(Exception):
    """툴킷 기본 예외"""

    def __init__(self, message: str, details: dict | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details or {}


# 입력/전제조건 관련 예외
class ParameterError(PhaseProbeError):
    """연산 전제조건 위반 (잘못된 차원, 표본 수, 반경 등)"""


class DimensionMismatchError(ParameterError):
    """벡터 차원 불일치"""

    def __init__(self, name: str, expected: int, actual: int) -> None:
        super().__init__(
            f"{name} 차원 불일치: 기대 {expected}, 실제 {actual}",
            details={"name": name, "expected": expected, "actual": actual},
        )
        self.expected = expected
        self.actual = actual


class DegeneratePointError(ParameterError):
    """비율이 정의되지 않는 퇴화점 (w = w*)"""

    def __init__(self, message: str = "w = w* 에서 one-point 비율이 정의되지 않습니다", distance: float = 0.0) -> None:
        super().__init__(message, details={"distance": distance})
        self.distance = distance


class DegenerateDirectionError(ParameterError):
    """방향이 정의되지 않음 (영벡터 방향, β = 0, 빈 직교 여공간 등)"""


class CapacityError(ParameterError):
    """조밀(dense) 행렬 상한 초과"""

    def __init__(self, what: str, size: int, cap: int) -> None:
        super().__init__(
            f"{what} 크기 {size} 이(가) 상한 {cap} 을(를) 초과합니다",
            details={"what": what, "size": size, "cap": cap},
        )
        self.size = size
        self.cap = cap


# 수치 계산 관련 예외
class NumericalError(PhaseProbeError):
    """수치 계산 실패"""


class OptimizerAbortError(NumericalError):
    """최적화 중단 (비유한 목적함수/기울기)"""

    def __init__(self, step: int, reason: str) -> None:
        super().__init__(
            f"최적화 중단 (step={step}): {reason}",
            details={"step": step, "reason": reason},
        )
        self.step = step


class DivergenceError(NumericalError):
    """경사 하강 발산"""

    def __init__(self, step: int, loss: float) -> None:
        super().__init__(
            f"경사 하강 발산 (step={step}, loss={loss:.3e})",
            details={"step": step, "loss": loss},
        )
        self.step = step
        self.loss = loss


class NonFiniteStateError(NumericalError):
    """적분 상태가 유한하지 않음"""

    def __init__(self, step: int) -> None:
        super().__init__(f"비유한 상태 발생 (step={step})", details={"step": step})
        self.step = step


class IdentityCheckError(NumericalError):
    """디버그 모드 항등식 검사 실패 (직접 계산 ≠ 전개식)"""

    def __init__(self, name: str, direct: float, expanded: float) -> None:
        super().__init__(
            f"{name} 항등식 불일치: 직접 {direct!r}, 전개 {expanded!r}",
            details={"name": name, "direct": direct, "expanded": expanded},
        )


class SemidefiniteFormError(PhaseProbeError):
    """음의 꼬리가 없는 반정치(semidefinite) 이차형식"""

    def __init__(self, lambda_minus: float) -> None:
        super().__init__(
            f"semidefinite form: λ₋ = {lambda_minus!r} ≥ 0, 음의 꼬리가 없습니다",
            details={"lambda_minus": lambda_minus},
        )
        self.lambda_minus = lambda_minus


# 설정/출력 관련 예외
class ConfigError(PhaseProbeError):
    """설정 파일 또는 스윕 설정 오류"""


class OutputError(PhaseProbeError):
    """결과 파일 쓰기 오류"""

    def __init__(self, path: str, reason: str) -> None:
        super().__init__(f"출력 실패 ({path}): {reason}", details={"path": path, "reason": reason})
        self.path = path
