"""비동기 스윕 러너

셀은 asyncio.Semaphore 로 동시 실행 수를 제한한 채 asyncio.to_thread 로
실행합니다. 각 셀은 자기 인스턴스와 최적화 상태만 소유합니다. 결과는 재정렬
버퍼를 거쳐 단일 기록기가 셀 순서대로 CSV 에 append 하므로 완료 순서와 무관하게
같은 파일이 만들어집니다.
"""

import asyncio
from pathlib import Path

from loguru import logger

from phase_probe.config.settings import settings
from phase_probe.sweep.cells import failed_record, run_cell
from phase_probe.sweep.models import SweepConfig, SweepRecord, SweepResult
from phase_probe.sweep.svg import emit_svg
from phase_probe.sweep.writers import CsvAppender, aggregate, emit_json_summary


class _OrderedSink:
    """셀 인덱스 순서로 레코드를 내보내는 재정렬 버퍼"""

    def __init__(self, appender: CsvAppender | None) -> None:
        self._appender = appender
        self._pending: dict[int, SweepRecord] = {}
        self._next = 0
        self._lock = asyncio.Lock()
        self.records: list[SweepRecord] = []

    async def put(self, index: int, record: SweepRecord) -> None:
        async with self._lock:
            self._pending[index] = record
            while self._next in self._pending:
                ready = self._pending.pop(self._next)
                if self._appender is not None:
                    self._appender.append(ready)
                self.records.append(ready)
                self._next += 1


async def _run_cells(cfg: SweepConfig, threads: int, appender: CsvAppender | None) -> list[SweepRecord]:
    cells = cfg.cells()
    semaphore = asyncio.Semaphore(threads)
    sink = _OrderedSink(appender)

    async def worker(index: int, d: int, n: int, seed_index: int) -> None:
        async with semaphore:
            try:
                record = await asyncio.to_thread(run_cell, cfg, d, seed_index, n)
            except Exception as exc:
                logger.error(f"셀 실패: metric={cfg.metric}, d={d}, n={n}, seed_index={seed_index}: {exc}")
                record = failed_record(cfg, d, seed_index, exc, n)
        await sink.put(index, record)
        logger.info(f"셀 {index + 1}/{len(cells)} 완료 (d={d}, n={n}, seed_index={seed_index})")

    await asyncio.gather(*(worker(i, d, n, k) for i, (d, n, k) in enumerate(cells)))
    return sink.records


async def run_sweep(cfg: SweepConfig, threads: int | None = None) -> SweepResult:
    """
    (d, n/d, seed) 격자 스윕 실행

    실패한 셀은 오류 표시 행으로 기록하고 스윕은 계속 진행합니다.

    Args:
        cfg: 스윕 설정
        threads: 동시 실행 셀 수 (기본 settings.threads)

    Returns:
        SweepResult (셀 순서 레코드, (d, n) 별 집계, 실패 수, 출력 경로)
    """
    threads = threads or settings.threads
    logger.info(
        f"스윕 시작: metric={cfg.metric}, d_grid={cfg.d_grid}, ratios={cfg.ratio_grid()}, seeds={cfg.seeds}, "
        f"셀={len(cfg.cells())}, threads={threads}"
    )

    outputs: dict[str, Path] = {}
    if cfg.out_csv is not None:
        with CsvAppender(cfg.out_csv) as appender:
            records = await _run_cells(cfg, threads, appender)
        outputs["csv"] = cfg.out_csv
    else:
        records = await _run_cells(cfg, threads, None)

    aggregates = aggregate(records)
    if cfg.out_json is not None:
        outputs["json"] = emit_json_summary(aggregates, cfg.out_json)
    if cfg.out_svg is not None:
        if aggregates:
            outputs["svg"] = emit_svg(aggregates, cfg.out_svg)
        else:
            logger.warning("유효한 셀이 없어 SVG 를 생략합니다")

    failed = sum(1 for record in records if record.failed)
    log = logger.warning if failed else logger.info
    log(f"스윕 완료: 레코드 {len(records)}개, 실패 {failed}개")
    return SweepResult(records=records, aggregates=aggregates, failed=failed, outputs=outputs)
