"""사영 Adam 기반 지형 탐침 q_r(d), Q_r(d)

- q_r(d) = min_{u∈S^{d-1}, ‖w−w*‖≤r} uᵀ∇²L(w)u
- Q_r(d) = min_{‖w−w*‖≤r} ⟨∇L(w), w−w*⟩/‖w−w*‖²

두 탐침 모두 궤적의 마지막 값이 아니라 최솟값을 보고합니다.
"""

import numpy as np
from loguru import logger

from phase_probe.landscape.empirical import as_vector, onepoint_objective, q_objective
from phase_probe.landscape.instance import make_rng, random_unit_vector
from phase_probe.landscape.models import Instance
from phase_probe.optimize.adam import projected_adam
from phase_probe.optimize.models import AdamConfig
from phase_probe.optimize.projection import AnnulusAround, BallAround, ProductProjection, UnitSphere
from phase_probe.probes.models import ProbeMetric, ProbeResult
from phase_probe.utils.exceptions import ParameterError

# Q 탐침이 w* 에 이만큼 이상 떨어져 있도록 유지
ONEPOINT_MIN_DISTANCE = 1e-8


def _check_radius(r: float) -> None:
    if not 0 < r < 2:
        raise ParameterError(f"탐침 반경은 0 < r < 2 이어야 합니다 (r={r})", details={"r": r})


def probe_q(
    inst: Instance,
    r: float,
    cfg: AdamConfig,
    seed: int,
    init_u: np.ndarray | None = None,
    init_w: np.ndarray | None = None,
) -> ProbeResult:
    """
    q 탐침: (u, w) 연결 변수에 곱 사영을 건 사영 Adam

    u 는 S^{d-1} 균등, w 는 구면 ‖w − w*‖ = r 균등으로 초기화합니다.

    Args:
        inst: 문제 인스턴스
        r: 공 반경 (0 < r < 2)
        cfg: Adam 설정 (기본 프리셋 fig2)
        seed: 초기화 시드
        init_u: 초기 방향 지정 (선택)
        init_w: 초기 점 지정 (선택)

    Returns:
        ProbeResult (metric=q)
    """
    _check_radius(r)
    d = inst.d
    rng = make_rng(seed)
    u0 = random_unit_vector(rng, d) if init_u is None else as_vector("init_u", init_u, d)
    w0 = inst.w_star + r * random_unit_vector(rng, d) if init_w is None else as_vector("init_w", init_w, d)

    proj = ProductProjection([(UnitSphere(), d), (BallAround(inst.w_star, r), d)])

    def objective(v: np.ndarray) -> tuple[float, np.ndarray]:
        value, grad_u, grad_w = q_objective(inst, v[:d], v[d:])
        return value, np.concatenate([grad_u, grad_w])

    logger.info(f"q 탐침 시작: d={d}, n={inst.n}, r={r}, steps={cfg.total_steps}, seed={seed}")
    trace = projected_adam(objective, np.concatenate([u0, w0]), cfg, proj, seed=seed)
    u, w = proj.split(trace.best_iterate)
    logger.info(f"q 탐침 완료: q={trace.best_value:.6g} ({trace.wall_time:.2f}초)")

    return ProbeResult(
        metric=ProbeMetric.HESSIAN,
        r=r,
        final_value=trace.best_value,
        u=u.copy(),
        w=w.copy(),
        trace=trace,
        seed=seed,
    )


def probe_Q(  # noqa: N802
    inst: Instance,
    r: float,
    cfg: AdamConfig,
    seed: int,
    init_w: np.ndarray | None = None,
) -> ProbeResult:
    """
    Q 탐침: one-point 비율을 ‖w − w*‖ ≤ r 에서 최소화

    사영은 ‖w − w*‖ ≥ 1e-8 을 유지해 퇴화점 w = w* 를 배제합니다.

    Args:
        inst: 문제 인스턴스
        r: 공 반경 (0 < r < 2)
        cfg: Adam 설정 (기본 프리셋 fig3)
        seed: 초기화 시드
        init_w: 초기 점 지정 (선택, 예: 증명서 점)

    Returns:
        ProbeResult (metric=Q, u=None)
    """
    _check_radius(r)
    d = inst.d
    rng = make_rng(seed)
    w0 = inst.w_star + r * random_unit_vector(rng, d) if init_w is None else as_vector("init_w", init_w, d)

    proj = AnnulusAround(inst.w_star, ONEPOINT_MIN_DISTANCE, r)

    logger.info(f"Q 탐침 시작: d={d}, n={inst.n}, r={r}, steps={cfg.total_steps}, seed={seed}")
    trace = projected_adam(lambda w: onepoint_objective(inst, w), w0, cfg, proj, seed=seed)
    logger.info(f"Q 탐침 완료: Q={trace.best_value:.6g} ({trace.wall_time:.2f}초)")

    return ProbeResult(
        metric=ProbeMetric.ONEPOINT,
        r=r,
        final_value=trace.best_value,
        u=None,
        w=trace.best_iterate.copy(),
        trace=trace,
        seed=seed,
    )
