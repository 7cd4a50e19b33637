"""두 표본 Kolmogorov-Smirnov 검정 (점근 임계값, 1% 수준)"""

from dataclasses import dataclass

import numpy as np
from scipy.stats import ks_2samp

# 1% 수준 점근 계수 c(α) = √(−ln(α/2)/2)
KS_COEF_1PCT = 1.628


@dataclass(frozen=True)
class KSResult:
    statistic: float
    pvalue: float
    critical: float

    @property
    def passed(self) -> bool:
        return self.statistic <= self.critical


def ks_critical(n: int, m: int) -> float:
    """1% 점근 임계값 1.628·√((n + m)/(n·m))"""
    return KS_COEF_1PCT * float(np.sqrt((n + m) / (n * m)))


def ks_two_sample(sample: np.ndarray, reference: np.ndarray) -> KSResult:
    result = ks_2samp(sample, reference, method="asymp")
    return KSResult(
        statistic=float(result.statistic),
        pvalue=float(result.pvalue),
        critical=ks_critical(sample.shape[0], reference.shape[0]),
    )
