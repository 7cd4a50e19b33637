"""스윕 결과 직렬화: CSV (증분 기록), JSON 요약, CSV 재판독, pandas 집계

CSV 형식
- 열: metric,d,n,seed,value,wall_ms,extra_json (헤더 필수)
- UTF-8, LF 줄바꿈
- 실수는 최단 왕복 10진 표현 (repr), extra_json 은 키 정렬된 압축 JSON
"""

import csv
import json
import math
import os
from pathlib import Path
from types import TracebackType
from typing import Any, TextIO

import numpy as np
import pandas as pd

from phase_probe.sweep.models import AggregateRow, SweepRecord
from phase_probe.utils.exceptions import OutputError

CSV_COLUMNS = ["metric", "d", "n", "seed", "value", "wall_ms", "extra_json"]


def format_float(value: float) -> str:
    """최단 왕복 10진 표현 (0.5 → "0.5")"""
    return repr(float(value))


def _row(record: SweepRecord) -> list[str]:
    return [
        record.metric,
        str(record.d),
        str(record.n),
        str(record.seed),
        format_float(record.value),
        format_float(record.wall_ms),
        json.dumps(record.extra, sort_keys=True, separators=(",", ":")),
    ]


class CsvAppender:
    """
    행 단위로 flush 하는 CSV 기록기 (중단되어도 읽을 수 있는 접두부 유지)

    with 블록으로 사용합니다. 열면 헤더를 씁니다.
    """

    def __init__(self, path: Path) -> None:
        self.path = Path(path)
        self._file: TextIO | None = None
        self._writer: Any = None

    def __enter__(self) -> "CsvAppender":
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._file = self.path.open("w", newline="", encoding="utf-8")
        except OSError as exc:
            raise OutputError(str(self.path), str(exc)) from exc
        self._writer = csv.writer(self._file, lineterminator="\n")
        self._writer.writerow(CSV_COLUMNS)
        self._file.flush()
        return self

    def append(self, record: SweepRecord) -> None:
        if self._file is None:
            raise OutputError(str(self.path), "열리지 않은 CSV 기록기")
        try:
            self._writer.writerow(_row(record))
            self._file.flush()
        except OSError as exc:
            raise OutputError(str(self.path), str(exc)) from exc

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None


def emit_csv(records: list[SweepRecord], path: Path) -> Path:
    """레코드 전체를 CSV 로 기록 (비어 있으면 헤더만)"""
    with CsvAppender(path) as appender:
        for record in records:
            appender.append(record)
    return Path(path)


def read_records(path: Path) -> list[SweepRecord]:
    """emit_csv 로 쓴 CSV 를 레코드로 복원 (실수는 round_trip 파싱)"""
    try:
        frame = pd.read_csv(
            path,
            dtype={"metric": str, "extra_json": str},
            float_precision="round_trip",
        )
    except OSError as exc:
        raise OutputError(str(path), str(exc)) from exc

    return [
        SweepRecord(
            metric=str(row["metric"]),
            d=int(row["d"]),
            n=int(row["n"]),
            seed=int(row["seed"]),
            value=float(row["value"]),
            wall_ms=float(row["wall_ms"]),
            extra=json.loads(row["extra_json"]),
        )
        for row in frame.to_dict("records")
    ]


def aggregate(records: list[SweepRecord]) -> list[AggregateRow]:
    """
    (metric, d, n) 별 mean / median / std(ddof=1) / count

    실패 셀(value 비유한)은 제외하며 count == 1 이면 std = 0 입니다.
    """
    finite = [r for r in records if math.isfinite(r.value)]
    if not finite:
        return []

    frame = pd.DataFrame([r.model_dump(include={"metric", "d", "n", "value"}) for r in finite])
    stats = (
        frame.groupby(["metric", "d", "n"], sort=True)["value"]
        .agg(["mean", "median", "std", "count"])
        .reset_index()
    )
    stats["std"] = stats["std"].fillna(0.0)

    return [
        AggregateRow(
            metric=str(row["metric"]),
            d=int(row["d"]),
            n=int(row["n"]),
            mean=float(row["mean"]),
            median=float(row["median"]),
            std=float(row["std"]),
            count=int(row["count"]),
        )
        for row in stats.to_dict("records")
    ]


def write_atomic(path: Path, text: str) -> Path:
    """임시 파일에 쓴 뒤 rename (부분 기록 방지)"""
    path = Path(path)
    tmp = path.with_name(f".{path.name}.tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with tmp.open("w", encoding="utf-8", newline="\n") as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
        tmp.replace(path)
    except OSError as exc:
        raise OutputError(str(path), str(exc)) from exc
    return path


def summary_dict(aggregates: list[AggregateRow]) -> dict[str, Any]:
    """{metric, per_d: [{d, n, mean, median, std, count}]}"""
    metric = aggregates[0].metric if aggregates else ""
    return {
        "metric": metric,
        "per_d": [row.model_dump(exclude={"metric"}) for row in aggregates],
    }


def emit_json_summary(aggregates: list[AggregateRow], path: Path) -> Path:
    """집계 요약 JSON (write-then-rename)"""
    text = json.dumps(summary_dict(aggregates), indent=2, ensure_ascii=False) + "\n"
    return write_atomic(path, text)


def to_jsonable(value: Any) -> Any:
    """numpy 값/배열을 JSON 직렬화 가능한 형태로 변환"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    return value
