"""몬테카를로 검증 보고서 및 옵션"""

from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field


class Selector(StrEnum):
    """Z_J 주변분포 검사의 인덱스 선택 규칙"""

    ARGMIN_Y = "argmin_y"
    ARGMAX_Y = "argmax_y"
    # 음성 대조군: Z 에 의존하는 선택
    ARGMAX_Z_NORM = "argmax_z_norm"


class SummandKind(StrEnum):
    """add-one 항등식의 합산항 f(z, z', y)"""

    HESSIAN_FORM = "hessian_form"      # a²·y
    ONEPOINT_FORM = "onepoint_form"    # a²(a + 2y)(a + y)


class TestReport(BaseModel):
    """
    통계 검증 보고서

    pass 는 observed 가 reference 범위 안에 있을 때만 True 입니다.
    """

    __test__ = False  # pytest 수집 대상 아님

    model_config = ConfigDict(populate_by_name=True)

    statistic_name: str
    observed: float
    reference: float | tuple[float, float]
    n_trials: int
    passed: bool = Field(alias="pass")
    seed: int
    details: dict[str, float | int | bool | str] = Field(default_factory=dict)

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] {self.statistic_name}: observed={self.observed:.6g}, reference={self.reference}"
