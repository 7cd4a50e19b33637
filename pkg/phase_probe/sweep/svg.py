"""집계 결과 정적 SVG 선 그래프 (외부 자원 없는 단일 파일)

x 축은 log2(d), y 축은 평균값, 오차 막대는 ±1 표준편차이며 n/d 비율마다
선 하나를 그립니다.
"""

import math
from collections import defaultdict
from collections.abc import Callable
from pathlib import Path
from xml.sax.saxutils import escape

from phase_probe.sweep.models import AggregateRow
from phase_probe.sweep.writers import write_atomic
from phase_probe.utils.exceptions import ParameterError

WIDTH, HEIGHT = 640, 400
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 130, 40, 50
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]
Y_TICKS = 5


def _scale(lo: float, hi: float, out_lo: float, out_hi: float) -> Callable[[float], float]:
    span = hi - lo
    if span <= 0:
        middle = 0.5 * (out_lo + out_hi)
        return lambda _: middle
    return lambda v: out_lo + (v - lo) / span * (out_hi - out_lo)


def render_svg(aggregates: list[AggregateRow], title: str | None = None) -> str:
    """집계 목록을 SVG 문서 문자열로 변환"""
    if not aggregates:
        raise ParameterError("집계가 비어 있어 SVG 를 만들 수 없습니다")

    series: dict[float, list[AggregateRow]] = defaultdict(list)
    for row in aggregates:
        series[round(row.ratio, 6)].append(row)

    xs = [math.log2(row.d) for row in aggregates]
    lows = [row.mean - row.std for row in aggregates]
    highs = [row.mean + row.std for row in aggregates]
    y_lo, y_hi = min(lows), max(highs)
    pad = 0.05 * (y_hi - y_lo) if y_hi > y_lo else max(1.0, abs(y_hi)) * 0.1
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_right = WIDTH - MARGIN_RIGHT
    plot_bottom = HEIGHT - MARGIN_BOTTOM
    sx = _scale(min(xs), max(xs), MARGIN_LEFT + 10, plot_right - 10)
    sy = _scale(y_lo, y_hi, plot_bottom, MARGIN_TOP)

    metric = aggregates[0].metric
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">'
        f"{escape(title or f'{metric} vs d')}</text>",
        # 축
        f'<line x1="{MARGIN_LEFT}" y1="{plot_bottom}" x2="{plot_right}" y2="{plot_bottom}" stroke="black"/>',
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{plot_bottom}" stroke="black"/>',
        f'<text x="{(MARGIN_LEFT + plot_right) / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">d (log2)</text>',
        f'<text x="16" y="{(MARGIN_TOP + plot_bottom) / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {(MARGIN_TOP + plot_bottom) / 2:.1f})">{escape(metric)}</text>',
    ]

    for d in sorted({row.d for row in aggregates}):
        x = sx(math.log2(d))
        parts.append(f'<line x1="{x:.1f}" y1="{plot_bottom}" x2="{x:.1f}" y2="{plot_bottom + 5}" stroke="black"/>')
        parts.append(f'<text x="{x:.1f}" y="{plot_bottom + 18}" text-anchor="middle">{d}</text>')

    for i in range(Y_TICKS):
        value = y_lo + (y_hi - y_lo) * i / (Y_TICKS - 1)
        y = sy(value)
        parts.append(f'<line x1="{MARGIN_LEFT - 5}" y1="{y:.1f}" x2="{MARGIN_LEFT}" y2="{y:.1f}" stroke="black"/>')
        parts.append(f'<text x="{MARGIN_LEFT - 8}" y="{y + 4:.1f}" text-anchor="end">{value:.3g}</text>')

    for k, (ratio, rows) in enumerate(sorted(series.items())):
        color = PALETTE[k % len(PALETTE)]
        rows = sorted(rows, key=lambda r: r.d)
        points = " ".join(f"{sx(math.log2(r.d)):.1f},{sy(r.mean):.1f}" for r in rows)
        parts.append(f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="2"/>')
        for r in rows:
            x = sx(math.log2(r.d))
            parts.append(
                f'<line x1="{x:.1f}" y1="{sy(r.mean - r.std):.1f}" x2="{x:.1f}" '
                f'y2="{sy(r.mean + r.std):.1f}" stroke="{color}"/>'
            )
            parts.append(f'<circle cx="{x:.1f}" cy="{sy(r.mean):.1f}" r="3" fill="{color}"/>')
        legend_y = MARGIN_TOP + 16 * k
        parts.append(
            f'<line x1="{plot_right + 10}" y1="{legend_y}" x2="{plot_right + 30}" '
            f'y2="{legend_y}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{plot_right + 36}" y="{legend_y + 4}">n/d = {ratio:g}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_svg(aggregates: list[AggregateRow], path: Path, title: str | None = None) -> Path:
    """집계 SVG 기록 (write-then-rename). 집계가 비어 있으면 ParameterError."""
    return write_atomic(path, render_svg(aggregates, title))
