"""스윕 셀 하나 실행: 인스턴스 생성 → 지표 계산 → SweepRecord"""

import time
from typing import Any

import numpy as np
from loguru import logger

from phase_probe.config.settings import settings
from phase_probe.landscape.instance import generate_instance, make_rng, random_unit_vector
from phase_probe.landscape.models import Instance
from phase_probe.optimize.descent import gradient_descent
from phase_probe.probes.certificates import certificate_hessian_thm23, certificate_onepoint_thm33
from phase_probe.probes.landscape_probes import probe_q, probe_Q
from phase_probe.probes.regions import annulus_min_ratio
from phase_probe.spectral.eigen import min_eigen_lanczos
from phase_probe.sweep.models import SweepConfig, SweepMetric, SweepRecord
from phase_probe.sweep.seeds import derive_cell_seed, splitmix64


def _evaluate(cfg: SweepConfig, inst: Instance, cell_seed: int) -> tuple[float, dict[str, Any]]:
    match cfg.metric:
        case SweepMetric.Q_HESSIAN | SweepMetric.Q_ONEPOINT:
            probe = probe_q if cfg.metric == SweepMetric.Q_HESSIAN else probe_Q
            result = probe(inst, cfg.r, cfg.adam_config(), cell_seed)
            return result.final_value, {"r": cfg.r, "steps": result.trace.steps}

        case SweepMetric.CERT_HESSIAN:
            cert = certificate_hessian_thm23(inst)
            return cert.value, {"delta_norm": cert.delta_norm, "index": cert.index}

        case SweepMetric.CERT_ONEPOINT:
            cert = certificate_onepoint_thm33(inst)
            return cert.value, {"delta_norm": cert.delta_norm, "index": cert.index}

        case SweepMetric.EIG_MIN:
            est = min_eigen_lanczos(inst, inst.w_star, seed=cell_seed)
            return est.lambda_min, {
                "converged": est.converged,
                "iterations": est.iterations,
                "residual": est.residual,
            }

        case SweepMetric.ANNULUS:
            check = annulus_min_ratio(inst, cfg.r_lo, cfg.r_hi, cfg.num_points, cell_seed)
            return check.min_ratio, {"r_lo": cfg.r_lo, "r_hi": cfg.r_hi}

        case SweepMetric.GD:
            # 인스턴스와 다른 난수열에서 시작 방향을 뽑음
            direction = random_unit_vector(make_rng(splitmix64(cell_seed)), inst.d)
            w0 = inst.w_star + cfg.start_distance * direction
            trace = gradient_descent(inst, w0, cfg.eta, cfg.max_steps, cfg.dist_tol)
            final_distance = float(trace.distances[-1])
            return final_distance, {"steps": trace.steps, "converged": final_distance <= cfg.dist_tol}

    raise ValueError(f"지원하지 않는 지표: {cfg.metric}")


def run_cell(cfg: SweepConfig, d: int, seed_index: int, n: int | None = None) -> SweepRecord:
    """
    (d, n, seed_index) 셀 실행 (n 생략 시 cfg.n_for(d))

    예외는 호출자(러너)가 처리합니다. 결정적 모드에서는 wall_ms 를 0 으로 기록합니다.
    """
    n = cfg.n_for(d) if n is None else n
    cell_seed = derive_cell_seed(cfg.base_seed, d, seed_index)
    started = time.perf_counter()

    inst = generate_instance(d, n, cell_seed, cfg.w_star_mode)
    value, extra = _evaluate(cfg, inst, cell_seed)

    wall_ms = 0.0 if settings.numerics.deterministic else (time.perf_counter() - started) * 1000.0
    logger.debug(f"셀 완료: metric={cfg.metric}, d={d}, n={n}, seed_index={seed_index}, value={value:.6g}")
    return SweepRecord(
        metric=str(cfg.metric),
        d=d,
        n=n,
        seed=cell_seed,
        value=float(value),
        wall_ms=wall_ms,
        extra={key: (bool(v) if isinstance(v, np.bool_) else v) for key, v in extra.items()},
    )


def failed_record(
    cfg: SweepConfig, d: int, seed_index: int, exc: Exception, n: int | None = None
) -> SweepRecord:
    """실패 셀 레코드 (value = NaN, extra.error)"""
    return SweepRecord(
        metric=str(cfg.metric),
        d=d,
        n=cfg.n_for(d) if n is None else n,
        seed=derive_cell_seed(cfg.base_seed, d, seed_index),
        value=float("nan"),
        wall_ms=0.0,
        extra={"error": f"{type(exc).__name__}: {exc}"},
    )
