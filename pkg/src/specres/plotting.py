"""Dependency-free SVG line charts (one polyline per series)."""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

_WIDTH, _HEIGHT = 720, 480
_MARGIN_LEFT, _MARGIN_RIGHT, _MARGIN_TOP, _MARGIN_BOTTOM = 70, 24, 40, 56
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
_N_TICKS = 5


def _bounds(values: list[float]) -> tuple[float, float]:
    finite = [v for v in values if math.isfinite(v)]
    if not finite:
        return 0.0, 1.0
    lo, hi = min(finite), max(finite)
    if lo == hi:
        pad = max(0.5, abs(lo) * 0.05)
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.04
    return lo - pad, hi + pad


def render_line_chart_svg(
    x: Sequence[float],
    series: Sequence[tuple[str, Sequence[float]]],
    title: str = "",
    x_label: str = "",
    y_label: str = "",
) -> str:
    """Build an SVG document plotting each (label, ys) series against x.

    Non-finite points split a polyline rather than being drawn.
    """
    x = list(x)
    x_lo, x_hi = _bounds(x)
    y_lo, y_hi = _bounds([v for _, ys in series for v in ys])
    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def sx(v: float) -> float:
        return _MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v: float) -> float:
        return _MARGIN_TOP + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_WIDTH / 2:.1f}" y="22" text-anchor="middle" '
            f'font-size="15">{escape(title)}</text>'
        )

    for i in range(_N_TICKS):
        frac = i / (_N_TICKS - 1)
        xv = x_lo + frac * (x_hi - x_lo)
        yv = y_lo + frac * (y_hi - y_lo)
        xp, yp = sx(xv), sy(yv)
        parts.append(
            f'<line x1="{xp:.1f}" y1="{_MARGIN_TOP}" x2="{xp:.1f}" '
            f'y2="{_MARGIN_TOP + plot_h}" stroke="#dddddd"/>'
        )
        parts.append(
            f'<line x1="{_MARGIN_LEFT}" y1="{yp:.1f}" x2="{_MARGIN_LEFT + plot_w}" '
            f'y2="{yp:.1f}" stroke="#dddddd"/>'
        )
        parts.append(
            f'<text x="{xp:.1f}" y="{_MARGIN_TOP + plot_h + 16}" '
            f'text-anchor="middle">{xv:.4g}</text>'
        )
        parts.append(
            f'<text x="{_MARGIN_LEFT - 6}" y="{yp + 4:.1f}" '
            f'text-anchor="end">{yv:.4g}</text>'
        )

    parts.append(
        f'<rect x="{_MARGIN_LEFT}" y="{_MARGIN_TOP}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="#333333"/>'
    )
    if x_label:
        parts.append(
            f'<text x="{_MARGIN_LEFT + plot_w / 2:.1f}" y="{_HEIGHT - 12}" '
            f'text-anchor="middle">{escape(x_label)}</text>'
        )
    if y_label:
        cy = _MARGIN_TOP + plot_h / 2
        parts.append(
            f'<text x="16" y="{cy:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 16 {cy:.1f})">{escape(y_label)}</text>'
        )

    for idx, (label, ys) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        segment: list[str] = []
        segments: list[list[str]] = []
        for xv, yv in zip(x, ys):
            if math.isfinite(xv) and math.isfinite(yv):
                segment.append(f"{sx(xv):.2f},{sy(yv):.2f}")
            elif segment:
                segments.append(segment)
                segment = []
        if segment:
            segments.append(segment)
        for points in segments:
            if len(points) == 1:
                cx, cy_ = points[0].split(",")
                parts.append(f'<circle cx="{cx}" cy="{cy_}" r="2.5" fill="{color}"/>')
            else:
                parts.append(
                    f'<polyline points="{" ".join(points)}" fill="none" '
                    f'stroke="{color}" stroke-width="1.8"/>'
                )
        ly = _MARGIN_TOP + 14 + 18 * idx
        lx = _MARGIN_LEFT + plot_w - 110
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.8"/>'
        )
        parts.append(f'<text x="{lx + 28}" y="{ly}">{escape(label)}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_line_chart_svg(
    path: str,
    x: Sequence[float],
    series: Sequence[tuple[str, Sequence[float]]],
    title: str = "",
    x_label: str = "",
    y_label: str = "",
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(render_line_chart_svg(x, series, title, x_label, y_label))
