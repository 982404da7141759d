"""Dependency-free SVG line charts for rolling spillover series.

The file content is assembled from the data alone with fixed-precision
coordinates, so identical inputs always produce byte-identical files.
Gaps in the series break the line; nothing is interpolated across them.
"""

from __future__ import annotations

import os
from datetime import date
from pathlib import Path

import numpy as np

from .rolling import SpilloverSeries

_WIDTH = 900
_HEIGHT = 360
_MARGIN_LEFT = 56
_MARGIN_RIGHT = 16
_MARGIN_TOP = 34
_MARGIN_BOTTOM = 42

_SIDE_TITLES = {
    "pos": "Spillover index, positive shocks",
    "neg": "Spillover index, negative shocks",
    "sym": "Spillover index, symmetric",
}


def _x_positions(dates: tuple[date, ...], x0: float, x1: float) -> list[float]:
    ordinals = np.array([d.toordinal() for d in dates], dtype=float)
    span = ordinals[-1] - ordinals[0]
    if span == 0.0:
        return [float((x0 + x1) / 2.0)] * len(dates)
    return list(x0 + (ordinals - ordinals[0]) / span * (x1 - x0))


def _tick_indices(count: int, want: int = 6) -> list[int]:
    if count <= want:
        return list(range(count))
    positions = np.linspace(0, count - 1, want)
    return sorted({int(round(p)) for p in positions})


def render_svg(series: SpilloverSeries, title: str | None = None, y_max: float = 100.0) -> str:
    """Build the chart markup for one spillover series."""
    if len(series) == 0:
        raise ValueError("cannot plot an empty series")
    if title is None:
        title = _SIDE_TITLES.get(series.side.value, "Spillover index")
    x0, x1 = float(_MARGIN_LEFT), float(_WIDTH - _MARGIN_RIGHT)
    y0, y1 = float(_HEIGHT - _MARGIN_BOTTOM), float(_MARGIN_TOP)

    def y_pix(value: float) -> float:
        return y0 + (value / y_max) * (y1 - y0)

    xs = _x_positions(series.window_end_dates, x0, x1)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{x0:.2f}" y="20" font-family="sans-serif" font-size="14" fill="black">'
        f"{title}</text>",
    ]
    grid_count = 4
    for step in range(grid_count + 1):
        level = y_max * step / grid_count
        y = y_pix(level)
        parts.append(
            f'<line x1="{x0:.2f}" y1="{y:.2f}" x2="{x1:.2f}" y2="{y:.2f}" '
            f'stroke="#cccccc" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x0 - 8:.2f}" y="{y + 4:.2f}" font-family="sans-serif" font-size="11" '
            f'fill="#444444" text-anchor="end">{level:g}</text>'
        )
    for i in _tick_indices(len(series)):
        x = xs[i]
        parts.append(
            f'<line x1="{x:.2f}" y1="{y0:.2f}" x2="{x:.2f}" y2="{y0 + 5:.2f}" '
            f'stroke="#444444" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{y0 + 18:.2f}" font-family="sans-serif" font-size="11" '
            f'fill="#444444" text-anchor="middle">{series.window_end_dates[i].isoformat()}</text>'
        )
    parts.append(
        f'<rect x="{x0:.2f}" y="{y1:.2f}" width="{x1 - x0:.2f}" height="{y0 - y1:.2f}" '
        f'fill="none" stroke="#444444" stroke-width="1"/>'
    )

    # Consecutive finite points form polyline runs; a lone point gets a dot.
    def flush(run: list[tuple[float, float]]) -> None:
        if len(run) == 1:
            parts.append(f'<circle cx="{run[0][0]:.2f}" cy="{run[0][1]:.2f}" r="2" fill="#1859a9"/>')
        elif len(run) > 1:
            points = " ".join(f"{x:.2f},{y:.2f}" for x, y in run)
            parts.append(
                f'<polyline points="{points}" fill="none" stroke="#1859a9" stroke-width="1.5"/>'
            )

    run: list[tuple[float, float]] = []
    for i, value in enumerate(series.index_values):
        if np.isnan(value):
            flush(run)
            run = []
        else:
            run.append((xs[i], y_pix(float(value))))
    flush(run)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_plot(series: SpilloverSeries, path: str | Path, title: str | None = None, y_max: float = 100.0) -> None:
    """Write the chart to a file atomically."""
    path = Path(path)
    markup = render_svg(series, title=title, y_max=y_max)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(markup, encoding="utf-8")
    os.replace(tmp, path)
