"""국소 영역 검사: 환형 one-point 비율, 국소 반경 γ_{n,d}, |w*ᵀxᵢ| 절단 분할"""

import math

import numpy as np
from loguru import logger
from scipy.stats import norm

from phase_probe.landscape.empirical import onepoint_ratio, project
from phase_probe.landscape.instance import make_rng
from phase_probe.landscape.models import Instance
from phase_probe.landscape.population import pop_onepoint_ratio
from phase_probe.optimize.descent import FlowField
from phase_probe.probes.models import AnnulusCheck, TruncationSplit
from phase_probe.utils.exceptions import ParameterError

# 점별 하한 x²(x² + 6xy + 4y²) ≥ −64y⁴ 의 계수
TAIL_BOUND_COEF = 64.0


def annulus_min_ratio(
    inst: Instance,
    r_lo: float,
    r_hi: float,
    num_points: int,
    seed: int,
    field: FlowField = FlowField.EMPIRICAL,
) -> AnnulusCheck:
    """
    환형 r_lo ≤ ‖w − w*‖ ≤ r_hi 에서 one-point 비율의 표본 최솟값

    방향은 정규화된 가우시안, 반경은 [r_lo, r_hi] 균등입니다.
    r_lo = r_hi 이면 모든 점이 그 반경의 구면 위에 놓입니다.

    Args:
        inst: 문제 인스턴스
        r_lo: 내부 반경
        r_hi: 외부 반경
        num_points: 표본 점 개수
        seed: 표본 시드
        field: empirical (인스턴스) 또는 population (무한 표본 오라클)

    Returns:
        AnnulusCheck (최솟값, argmin, 점별 비율)
    """
    if not 0 < r_lo <= r_hi:
        raise ParameterError(
            f"0 < r_lo ≤ r_hi 이어야 합니다 (r_lo={r_lo}, r_hi={r_hi})",
            details={"r_lo": r_lo, "r_hi": r_hi},
        )
    if num_points < 1:
        raise ParameterError(f"num_points 는 1 이상이어야 합니다 (num_points={num_points})")

    rng = make_rng(seed)
    directions = rng.standard_normal((num_points, inst.d))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = rng.uniform(r_lo, r_hi, size=num_points)
    points = inst.w_star + radii[:, None] * directions

    if FlowField(field) == FlowField.POPULATION:
        ratios = np.array([pop_onepoint_ratio(w, inst.w_star) for w in points])
    else:
        ratios = np.array([onepoint_ratio(inst, w) for w in points])

    best = int(np.argmin(ratios))
    logger.info(
        f"환형 검사 완료: field={field}, r∈[{r_lo}, {r_hi}], points={num_points}, "
        f"최소 비율={ratios[best]:.6g}"
    )
    return AnnulusCheck(
        min_ratio=float(ratios[best]),
        argmin_w=points[best].copy(),
        r_lo=r_lo,
        r_hi=r_hi,
        ratios=ratios,
    )


def locality_radius(n: float, d: int, C: float = 3.0) -> float:  # noqa: N803
    """γ_{n,d} = C·√(ln n / d)"""
    if n < 2 or d < 1 or C <= 0:
        raise ParameterError(
            f"n ≥ 2, d ≥ 1, C > 0 이어야 합니다 (n={n}, d={d}, C={C})",
            details={"n": n, "d": d, "C": C},
        )
    return C * math.sqrt(math.log(n) / d)


def gaussian_fourth_moment_tail(t: float) -> float:
    """E[Y⁴·1{|Y| > t}] = 2[(t³ + 3t)φ(t) + 3Φ̄(t)], Y ~ N(0, 1)"""
    if t < 0:
        raise ParameterError(f"t 는 0 이상이어야 합니다 (t={t})")
    return 2.0 * ((t**3 + 3.0 * t) * norm.pdf(t) + 3.0 * norm.sf(t))


def truncation_split(inst: Instance, t: float) -> TruncationSplit:
    """
    |w*ᵀxᵢ| ≤ t 와 > t 로 표본 분할, 그리고 꼬리 하한항 (64/n)·Σ_{geq}(w*ᵀxᵢ)⁴

    꼬리항의 기댓값은 64·gaussian_fourth_moment_tail(t) 입니다.
    """
    if t <= 0:
        raise ParameterError(f"t 는 양수여야 합니다 (t={t})", details={"t": t})

    b = np.abs(project(inst.samples, inst.w_star))
    outside = b > t
    per_sample = TAIL_BOUND_COEF * np.where(outside, b**4, 0.0)
    tail_term = float(np.sum(per_sample) / inst.n)
    tail_se = float(np.std(per_sample, ddof=1) / np.sqrt(inst.n)) if inst.n > 1 else 0.0

    return TruncationSplit(
        t=t,
        leq=np.flatnonzero(~outside),
        geq=np.flatnonzero(outside),
        tail_term=tail_term,
        tail_se=tail_se,
    )
