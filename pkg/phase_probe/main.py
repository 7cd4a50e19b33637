"""phase-probe 명령행 진입점

서브커맨드: gen | eval | probe-q | probe-onepoint | certificate | annulus-check |
eig-min | gd | flow | addone-test | sweep

결과는 stdout (또는 --out) 에, 로그는 stderr 에 씁니다.
종료 코드: 0 정상, 1 수치 실패 또는 실패 셀이 있는 스윕, 2 사용법/설정 오류.
"""

import argparse
import asyncio
import csv
import io
import json
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger
from pydantic import ValidationError

from phase_probe.addone.models import Selector, SummandKind
from phase_probe.addone.tails import empirical_min_z, extreme_value_mean, quadratic_form_tail
from phase_probe.addone.verification import (
    verify_addone_identity,
    verify_inner_product_independence,
    verify_zj_marginal,
)
from phase_probe.config.settings import settings
from phase_probe.landscape.empirical import decompose, gradient, loss, onepoint_ratio
from phase_probe.landscape.instance import generate_instance, make_rng, random_unit_vector
from phase_probe.landscape.models import Instance, WStarMode
from phase_probe.landscape.population import pop_loss, pop_onepoint_ratio
from phase_probe.optimize.descent import FlowField, FlowMethod, contraction_slope, gradient_descent, gradient_flow
from phase_probe.optimize.models import PRESET_SCHEDULES, AdamConfig, ScheduleSegment, parse_schedule
from phase_probe.probes.certificates import (
    certificate_hessian_thm21,
    certificate_hessian_thm23,
    certificate_onepoint_thm33,
)
from phase_probe.probes.landscape_probes import probe_q, probe_Q
from phase_probe.probes.models import CertificateKind
from phase_probe.probes.regions import annulus_min_ratio, locality_radius
from phase_probe.spectral.eigen import min_eigen_dense, min_eigen_lanczos, min_eigen_power
from phase_probe.spectral.models import EigenMethod
from phase_probe.sweep.config_file import load_config_file
from phase_probe.sweep.models import SweepConfig, SweepMetric
from phase_probe.sweep.runner import run_sweep
from phase_probe.sweep.seeds import splitmix64
from phase_probe.sweep.writers import summary_dict, to_jsonable, write_atomic
from phase_probe.utils.exceptions import ConfigError, ParameterError, PhaseProbeError
from phase_probe.utils.logger import setup_logger

Handler = Callable[[argparse.Namespace], int]


# ── 출력 ──────────────────────────────────────────────────────────────────────


def _render(payload: dict[str, Any], fmt: str) -> str:
    data = to_jsonable(payload)
    if fmt == "json":
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    scalars = {k: v for k, v in data.items() if not isinstance(v, dict | list)}
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(scalars.keys())
    writer.writerow(repr(v) if isinstance(v, float) else v for v in scalars.values())
    return buffer.getvalue()


def _emit(args: argparse.Namespace, payload: dict[str, Any]) -> None:
    text = _render(payload, args.format)
    if args.out:
        write_atomic(Path(args.out), text)
        logger.info(f"결과 저장: {args.out}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


# ── 인스턴스/점 구성 ──────────────────────────────────────────────────────────


def _sample_count(args: argparse.Namespace) -> int:
    return args.n if args.n is not None else int(round(args.ratio * args.d))


def _make_instance(args: argparse.Namespace) -> Instance:
    if getattr(args, "instance", None):
        with np.load(args.instance) as data:
            if "samples" not in data or "w_star" not in data:
                raise ParameterError(
                    f"인스턴스 파일에 samples/w_star 배열이 없습니다: {args.instance}",
                    details={"keys": sorted(data.files)},
                )
            raw_seed = str(data["seed"]) if "seed" in data else ""
            seed = int(raw_seed) if raw_seed.lstrip("-").isdigit() else None
            inst = Instance.from_arrays(data["samples"], data["w_star"], seed=seed)
        logger.info(f"인스턴스 로드: {args.instance} (d={inst.d}, n={inst.n})")
        return inst
    return generate_instance(args.d, _sample_count(args), args.seed, WStarMode(args.w_star_mode))


def _offset_point(inst: Instance, radius: float, seed: int) -> np.ndarray:
    """w* + radius·(균등 단위 방향), 방향 난수열은 인스턴스와 분리"""
    if radius == 0:
        return inst.w_star.copy()
    return inst.w_star + radius * random_unit_vector(make_rng(splitmix64(seed)), inst.d)


def _split_point(inst: Instance, alpha: float, beta: float, seed: int) -> np.ndarray:
    """w = α·w* + β·w⊥ (w⊥ 는 w* 에 직교하는 균등 단위 벡터)"""
    if inst.d < 2:
        raise ParameterError("β > 0 인 점에는 d ≥ 2 가 필요합니다", details={"d": inst.d})
    v = random_unit_vector(make_rng(splitmix64(seed)), inst.d)
    v -= (v @ inst.w_star) * inst.w_star
    return alpha * inst.w_star + beta * v / np.linalg.norm(v)


def _instance_summary(inst: Instance) -> dict[str, Any]:
    return {"d": inst.d, "n": inst.n, "seed": inst.seed}


def _adam_config(args: argparse.Namespace) -> AdamConfig:
    """--schedule 이 있으면 그것을, 아니면 --preset"""
    if args.schedule:
        return AdamConfig(schedule=args.schedule)
    return AdamConfig.preset(args.preset)


# ── 서브커맨드 ────────────────────────────────────────────────────────────────


def cmd_gen(args: argparse.Namespace) -> int:
    inst = _make_instance(args)
    payload = {**_instance_summary(inst), "w_star_mode": args.w_star_mode, "y_sq_mean": float(np.mean(inst.y_sq))}
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savez(path, samples=inst.samples, w_star=inst.w_star, seed=np.array(str(inst.seed)))
        payload["path"] = str(path if path.suffix == ".npz" else path.with_suffix(path.suffix + ".npz"))
        logger.info(f"인스턴스 저장: {payload['path']}")
    sys.stdout.write(_render(payload, args.format))
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    inst = _make_instance(args)
    w = _offset_point(inst, args.radius, args.seed)
    point = decompose(w, inst.w_star)
    payload: dict[str, Any] = {
        **_instance_summary(inst),
        "radius": args.radius,
        "loss": loss(inst, w),
        "gradient_norm": float(np.linalg.norm(gradient(inst, w))),
        "alpha": point.alpha,
        "beta": point.beta,
        "in_local_region": point.in_local_region,
        "min_curvature_weight": empirical_min_z(inst, w),
        "pop_loss": pop_loss(w, inst.w_star),
    }
    if args.radius > 0:
        payload["onepoint_ratio"] = onepoint_ratio(inst, w)
        payload["pop_onepoint_ratio"] = pop_onepoint_ratio(w, inst.w_star)
    _emit(args, payload)
    return 0


def cmd_probe_q(args: argparse.Namespace) -> int:
    inst = _make_instance(args)
    result = probe_q(inst, args.r, _adam_config(args), args.seed)
    point = decompose(result.w, inst.w_star)
    _emit(
        args,
        {
            "metric": str(result.metric),
            **_instance_summary(inst),
            "r": result.r,
            "value": result.final_value,
            "last_value": float(result.trace.values[-1]),
            "steps": result.trace.steps,
            "wall_time": result.trace.wall_time,
            "alpha": point.alpha,
            "beta": point.beta,
        },
    )
    return 0


def cmd_probe_onepoint(args: argparse.Namespace) -> int:
    inst = _make_instance(args)
    init_w = None
    payload: dict[str, Any] = {}
    if args.init == "certificate":
        cert = certificate_onepoint_thm33(inst)
        payload["certificate_value"] = cert.value
        if cert.delta_norm <= args.r:
            init_w = cert.w
        else:
            logger.warning(f"증명서 점이 반경 밖입니다 (‖δ‖={cert.delta_norm:.4f} > r={args.r}), 무작위 초기화")
    result = probe_Q(inst, args.r, _adam_config(args), args.seed, init_w=init_w)
    _emit(
        args,
        {
            "metric": str(result.metric),
            **_instance_summary(inst),
            "r": result.r,
            "value": result.final_value,
            "last_value": float(result.trace.values[-1]),
            "steps": result.trace.steps,
            "wall_time": result.trace.wall_time,
            "distance": float(np.linalg.norm(result.w - inst.w_star)),
            **payload,
        },
    )
    return 0


def cmd_certificate(args: argparse.Namespace) -> int:
    inst = _make_instance(args)
    match CertificateKind(args.kind):
        case CertificateKind.HESSIAN_THM23:
            cert = certificate_hessian_thm23(inst)
        case CertificateKind.HESSIAN_THM21:
            cert = certificate_hessian_thm21(inst, _split_point(inst, args.alpha, args.beta, args.seed))
        case CertificateKind.ONEPOINT_THM33:
            cert = certificate_onepoint_thm33(inst)
    payload: dict[str, Any] = {
        "kind": str(cert.kind),
        **_instance_summary(inst),
        "index": cert.index,
        "value": cert.value,
        "delta_norm": cert.delta_norm,
        "extra": cert.extra,
    }
    if inst.n >= 2:
        payload["locality_radius"] = locality_radius(inst.n, inst.d, args.locality_constant)
    _emit(args, payload)
    return 0


def cmd_annulus(args: argparse.Namespace) -> int:
    inst = _make_instance(args)
    check = annulus_min_ratio(inst, args.r_lo, args.r_hi, args.num_points, args.seed, FlowField(args.field))
    _emit(
        args,
        {
            **_instance_summary(inst),
            "field": args.field,
            "r_lo": check.r_lo,
            "r_hi": check.r_hi,
            "num_points": args.num_points,
            "min_ratio": check.min_ratio,
            "argmin_distance": float(np.linalg.norm(check.argmin_w - inst.w_star)),
        },
    )
    return 0


def cmd_eig_min(args: argparse.Namespace) -> int:
    inst = _make_instance(args)
    w = _offset_point(inst, args.radius, args.seed)
    match EigenMethod(args.method):
        case EigenMethod.DENSE:
            est = min_eigen_dense(inst, w)
        case EigenMethod.LANCZOS:
            est = min_eigen_lanczos(inst, w, args.max_iters, args.tol, args.seed)
        case EigenMethod.POWER:
            est = min_eigen_power(inst, w, tol=args.tol, seed=args.seed)
    _emit(
        args,
        {
            **_instance_summary(inst),
            "method": str(est.method),
            "radius": args.radius,
            "lambda_min": est.lambda_min,
            "residual": est.residual,
            "iterations": est.iterations,
            "converged": est.converged,
        },
    )
    return 0


def cmd_gd(args: argparse.Namespace) -> int:
    inst = _make_instance(args)
    w0 = _offset_point(inst, args.start_distance, args.seed)
    trace = gradient_descent(inst, w0, args.eta, args.max_steps, args.dist_tol)
    final_distance = float(trace.distances[-1])
    _emit(
        args,
        {
            **_instance_summary(inst),
            "eta": args.eta,
            "steps": trace.steps,
            "final_distance": final_distance,
            "final_loss": float(trace.values[-1]),
            "converged": final_distance <= args.dist_tol,
        },
    )
    return 0


def cmd_flow(args: argparse.Namespace) -> int:
    field = FlowField(args.field)
    if field == FlowField.EMPIRICAL:
        inst = _make_instance(args)
        w_star = inst.w_star
    else:
        inst = None
        w_star = np.zeros(args.d)
        w_star[0] = 1.0
    w0 = w_star + args.start_distance * random_unit_vector(make_rng(splitmix64(args.seed)), w_star.shape[0])
    trace = gradient_flow(
        w0, args.dt, args.horizon, field, FlowMethod(args.method), inst=inst, w_star=w_star, record_iterates=args.record
    )
    payload: dict[str, Any] = {"iterates": trace.iterates} if args.record else {}
    _emit(
        args,
        {
            "d": int(w_star.shape[0]),
            "field": str(field),
            "method": args.method,
            "dt": args.dt,
            "horizon": args.horizon,
            "steps": trace.steps,
            "initial_distance_sq": float(trace.distances[0]),
            "final_distance_sq": float(trace.distances[-1]),
            "contraction_slope": contraction_slope(trace, args.dt),
            "monotone": trace.is_monotone,
            **payload,
        },
    )
    return 0


def cmd_addone(args: argparse.Namespace) -> int:
    match args.test:
        case "zj-marginal":
            report = verify_zj_marginal(args.n, args.d, Selector(args.selector), args.trials, args.seed)
        case "addone":
            report = verify_addone_identity(
                args.n, args.d, args.trials, args.seed, SummandKind(args.f_kind), control=args.control
            )
        case "inner-product":
            report = verify_inner_product_independence(
                args.n, args.d, args.trials, args.seed, gaussian=not args.rademacher, fourth_band=args.fourth_band
            )
        case "extreme-value":
            report = extreme_value_mean(args.n, args.trials, args.seed)
        case _:
            report = quadratic_form_tail(args.alpha, args.beta, args.t, args.trials, args.seed, args.kappa)
    _emit(args, report.model_dump(by_alias=True))
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        cfg = SweepConfig(
            metric=args.metric,
            d_grid=args.d_grid,
            ratio=args.ratio,
            ratios=args.ratios,
            n=args.n,
            seeds=args.seeds,
            base_seed=args.base_seed if args.base_seed is not None else args.seed,
            w_star_mode=args.w_star_mode,
            r=args.r,
            r_lo=args.r_lo,
            r_hi=args.r_hi,
            num_points=args.num_points,
            eta=args.eta,
            max_steps=args.max_steps,
            start_distance=args.start_distance,
            dist_tol=args.dist_tol,
            preset=args.preset,
            schedule=args.schedule,
            out_csv=args.out,
            out_json=args.json_out,
            out_svg=args.svg_out,
        )
    except ValidationError as exc:
        raise ConfigError(f"잘못된 스윕 설정: {exc}") from exc

    result = asyncio.run(run_sweep(cfg, args.threads))
    summary = {**summary_dict(result.aggregates), "failed": result.failed, "outputs": result.outputs}
    if args.format == "json":
        sys.stdout.write(json.dumps(to_jsonable(summary), indent=2, ensure_ascii=False) + "\n")
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["metric", "d", "n", "mean", "median", "std", "count"])
        for row in result.aggregates:
            writer.writerow([row.metric, row.d, row.n, repr(row.mean), repr(row.median), repr(row.std), row.count])
    return 1 if result.failed else 0


# ── 파서 ──────────────────────────────────────────────────────────────────────


def _int_list(text: str) -> list[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"정수 목록이 아닙니다: {text}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"실수 목록이 아닙니다: {text}") from exc


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"정수가 아닙니다: {text}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"1 이상이어야 합니다: {text}")
    return value


def _schedule(text: str) -> list[ScheduleSegment]:
    try:
        return parse_schedule(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("global")
    group.add_argument("--seed", type=int, default=0, help="64비트 시드")
    group.add_argument("--out", type=str, default=None, help="결과 파일 경로 (sweep: CSV, gen: .npz)")
    group.add_argument("--format", choices=["csv", "json"], default="json", help="결과 형식")
    group.add_argument("--threads", type=_positive_int, default=None, help="스윕 워커 수 (기본 PHASEPROBE_THREADS)")
    group.add_argument("--deterministic", action="store_true", help="고정 순서 합산 (비트 재현)")
    group.add_argument("--debug-checks", action="store_true", help="전개식 항등식 검사")
    group.add_argument("--config", type=str, default=None, help="key = value 설정 파일")
    group.add_argument("--log-level", type=str, default=None, help="로그 레벨")
    return common


def _instance_flags(p: argparse.ArgumentParser, d_default: int = 64) -> None:
    p.add_argument("--d", type=int, default=d_default, help="차원")
    p.add_argument("--n", type=int, default=None, help="표본 수 (지정 시 --ratio 무시)")
    p.add_argument("--ratio", type=float, default=2.0, help="n/d")
    p.add_argument("--w-star-mode", choices=[m.value for m in WStarMode], default=WStarMode.CANONICAL_E1.value)
    p.add_argument("--instance", type=str, default=None, help="gen 으로 저장한 .npz 인스턴스")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    """최상위 파서와 {서브커맨드: 파서}"""
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="phase-probe",
        description="실수 위상 복원 최소제곱 목적함수의 국소 지형 탐침 도구",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers: dict[str, argparse.ArgumentParser] = {}

    def add(name: str, handler: Handler, help_text: str, required: tuple[str, ...] = ()) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler, required_flags=required)
        subparsers[name] = p
        return p

    p = add("gen", cmd_gen, "가우시안 인스턴스 생성")
    _instance_flags(p)

    p = add("eval", cmd_eval, "w* 근방 한 점에서 지형 값 평가")
    _instance_flags(p)
    p.add_argument("--radius", type=float, default=0.1, help="‖w − w*‖")

    p = add("probe-q", cmd_probe_q, "헤시안 이차형식 최솟값 탐침 q_r(d)")
    _instance_flags(p)
    p.add_argument("--r", type=float, default=0.1, help="탐침 반경")
    p.add_argument("--preset", choices=sorted(PRESET_SCHEDULES), default="fig2")
    p.add_argument("--schedule", type=_schedule, default=None, help="steps:lr,... (--preset 대신)")

    p = add("probe-onepoint", cmd_probe_onepoint, "one-point 비율 최솟값 탐침 Q_r(d)")
    _instance_flags(p)
    p.add_argument("--r", type=float, default=0.1, help="탐침 반경")
    p.add_argument("--preset", choices=sorted(PRESET_SCHEDULES), default="fig3")
    p.add_argument("--schedule", type=_schedule, default=None, help="steps:lr,... (--preset 대신)")
    p.add_argument("--init", choices=["random", "certificate"], default="random")

    p = add("certificate", cmd_certificate, "폐형식 적대적 증명서")
    _instance_flags(p)
    p.add_argument("--kind", choices=[k.value for k in CertificateKind], default=CertificateKind.HESSIAN_THM23.value)
    p.add_argument("--alpha", type=float, default=1.0, help="hessian_thm21 점의 α")
    p.add_argument("--beta", type=float, default=0.5, help="hessian_thm21 점의 β")
    p.add_argument("--locality-constant", type=float, default=3.0, help="γ_{n,d} 의 상수 C")

    p = add("annulus-check", cmd_annulus, "환형 영역 one-point 비율 최솟값")
    _instance_flags(p, d_default=256)
    p.add_argument("--r-lo", type=float, default=0.15)
    p.add_argument("--r-hi", type=float, default=0.3)
    p.add_argument("--num-points", type=int, default=500)
    p.add_argument("--field", choices=[f.value for f in FlowField], default=FlowField.EMPIRICAL.value)

    p = add("eig-min", cmd_eig_min, "헤시안 최소 고유값")
    _instance_flags(p)
    p.add_argument("--method", choices=[m.value for m in EigenMethod], default=EigenMethod.LANCZOS.value)
    p.add_argument("--radius", type=float, default=0.0, help="‖w − w*‖ (0 이면 w*)")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)

    p = add("gd", cmd_gd, "경험적 손실 경사 하강")
    _instance_flags(p, d_default=128)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--max-steps", type=int, default=500)
    p.add_argument("--start-distance", type=float, default=0.3)
    p.add_argument("--dist-tol", type=float, default=0.01)

    p = add("flow", cmd_flow, "경사 흐름 적분")
    _instance_flags(p, d_default=10)
    p.add_argument("--field", choices=[f.value for f in FlowField], default=FlowField.POPULATION.value)
    p.add_argument("--method", choices=[m.value for m in FlowMethod], default=FlowMethod.RK4.value)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--horizon", type=float, default=5.0, help="적분 구간 T")
    p.add_argument("--start-distance", type=float, default=0.3)
    p.add_argument("--record", action="store_true", help="반복점 궤적을 결과에 포함 (json)")

    p = add("addone-test", cmd_addone, "몬테카를로 확률 보조정리 검증", required=("test",))
    p.add_argument(
        "--test",
        choices=["zj-marginal", "addone", "inner-product", "extreme-value", "quadratic-tail"],
        default=None,
    )
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--d", type=int, default=10)
    p.add_argument("--trials", type=int, default=5000)
    p.add_argument("--selector", choices=[s.value for s in Selector], default=Selector.ARGMIN_Y.value)
    p.add_argument("--f-kind", choices=[k.value for k in SummandKind], default=SummandKind.HESSIAN_FORM.value)
    p.add_argument("--control", action="store_true", help="add-one 음성 대조군")
    p.add_argument("--rademacher", action="store_true", help="내적 독립성 음성 대조군")
    p.add_argument("--fourth-band", type=float, default=None, help="4차 모멘트 고정 허용치 k (k/√T, 기본 3·ŝ/√T)")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--t", type=float, default=3.0)
    p.add_argument("--kappa", type=float, default=0.1)

    p = add("sweep", cmd_sweep, "(d, n/d, seed) 격자 스윕", required=("metric", "d_grid"))
    p.add_argument("--metric", choices=[m.value for m in SweepMetric], default=None)
    p.add_argument("--d-grid", type=_int_list, default=None, help="쉼표 구분 차원 목록")
    p.add_argument("--ratio", type=float, default=2.0)
    p.add_argument("--ratios", type=_float_list, default=None, help="쉼표 구분 n/d 목록 (지정 시 --ratio 무시)")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--base-seed", type=int, default=None, help="기본: --seed")
    p.add_argument("--w-star-mode", choices=[m.value for m in WStarMode], default=WStarMode.CANONICAL_E1.value)
    p.add_argument("--r", type=float, default=0.1)
    p.add_argument("--r-lo", type=float, default=0.15)
    p.add_argument("--r-hi", type=float, default=0.3)
    p.add_argument("--num-points", type=int, default=500)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--max-steps", type=int, default=500)
    p.add_argument("--start-distance", type=float, default=0.3)
    p.add_argument("--dist-tol", type=float, default=0.01)
    p.add_argument("--preset", choices=sorted(PRESET_SCHEDULES), default=None)
    p.add_argument("--schedule", type=_schedule, default=None, help="steps:lr,... (--preset 보다 우선)")
    p.add_argument("--json-out", type=str, default=None, help="집계 요약 JSON 경로")
    p.add_argument("--svg-out", type=str, default=None, help="집계 SVG 경로")

    return parser, subparsers


def _apply_config_file(subparsers: dict[str, argparse.ArgumentParser], argv: Sequence[str] | None) -> None:
    """설정 파일 값을 서브커맨드 기본값으로 등록 (명령행 플래그가 우선)"""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return

    values = load_config_file(Path(known.config)).flag_defaults()
    for p in subparsers.values():
        dests = {action.dest for action in p._actions}
        p.set_defaults(**{key: value for key, value in values.items() if key in dests})


def main(argv: Sequence[str] | None = None) -> int:
    """명령행 실행 후 종료 코드 반환"""
    parser, subparsers = build_parser()
    try:
        _apply_config_file(subparsers, argv)
        args = parser.parse_args(argv)
    except ConfigError as exc:
        sys.stderr.write(f"phase-probe: 설정 오류: {exc.message}\n")
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)

    missing = [name for name in args.required_flags if getattr(args, name) is None]
    if missing:
        flags = ", ".join("--" + name.replace("_", "-") for name in missing)
        try:
            subparsers[args.command].error(f"다음 인자가 필요합니다: {flags}")
        except SystemExit as exc:
            return int(exc.code or 2)

    setup_logger(
        log_level=args.log_level or settings.log.level,
        log_dir=settings.log.directory,
        file_sink=settings.log.file_sink,
    )
    if args.deterministic:
        settings.numerics.deterministic = True
    if args.debug_checks:
        settings.numerics.debug_checks = True

    try:
        return args.handler(args)
    except ConfigError as exc:
        logger.error(f"설정 오류: {exc.message}")
        return 2
    except PhaseProbeError as exc:
        logger.error(f"{type(exc).__name__}: {exc.message} {exc.details}")
        return 1
    except OSError as exc:
        logger.error(f"입출력 오류: {exc}")
        return 1
    except ValueError as exc:
        logger.error(f"잘못된 입력: {exc}")
        return 1


def run() -> None:
    """콘솔 스크립트 진입점"""
    sys.exit(main())


if __name__ == "__main__":
    run()
