"""Minimal static SVG line charts for metric series.

Missing values break a curve into separate segments rather than being drawn
as zero. Output depends only on the input numbers, so files are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


@dataclass(frozen=True)
class Curve:
    label: str
    y: np.ndarray
    x: np.ndarray | None = None


@dataclass(frozen=True)
class ChartStyle:
    width: int = 720
    height: int = 360
    margin_left: int = 60
    margin_right: int = 160
    margin_top: int = 36
    margin_bottom: int = 44
    ticks: int = 5


def _nice_range(lo: float, hi: float) -> tuple[float, float]:
    if not np.isfinite(lo) or not np.isfinite(hi):
        return 0.0, 1.0
    if hi - lo < 1e-12:
        pad = max(abs(hi), 1.0) * 0.05
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def _segments(x: np.ndarray, y: np.ndarray):
    ok = np.isfinite(y)
    start = None
    for i, good in enumerate(ok):
        if good and start is None:
            start = i
        elif not good and start is not None:
            yield x[start:i], y[start:i]
            start = None
    if start is not None:
        yield x[start:], y[start:]


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def line_chart_svg(curves: list[Curve], title: str = "", xlabel: str = "window start",
                   ylabel: str = "value", style: ChartStyle = ChartStyle()) -> str:
    """Render curves to an SVG document string."""
    xs = [np.arange(len(c.y), dtype=float) if c.x is None else np.asarray(c.x, float) for c in curves]
    ys = [np.asarray(c.y, dtype=float) for c in curves]
    finite = [y[np.isfinite(y)] for y in ys]
    all_y = np.concatenate(finite) if finite else np.array([])
    all_x = np.concatenate(xs) if xs else np.array([])
    y0, y1 = _nice_range(all_y.min(), all_y.max()) if all_y.size else (0.0, 1.0)
    x0, x1 = (float(all_x.min()), float(all_x.max())) if all_x.size else (0.0, 1.0)
    if x1 <= x0:
        x1 = x0 + 1.0

    s = style
    pw = s.width - s.margin_left - s.margin_right
    ph = s.height - s.margin_top - s.margin_bottom
    px = lambda v: s.margin_left + (v - x0) / (x1 - x0) * pw  # noqa: E731
    py = lambda v: s.margin_top + (1.0 - (v - y0) / (y1 - y0)) * ph  # noqa: E731

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{s.width}" height="{s.height}" '
        f'viewBox="0 0 {s.width} {s.height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{s.width}" height="{s.height}" fill="white"/>',
        f'<text x="{s.width / 2:.1f}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<rect x="{s.margin_left}" y="{s.margin_top}" width="{pw}" height="{ph}" '
        'fill="none" stroke="#444"/>',
    ]
    for k in range(s.ticks + 1):
        fy = y0 + (y1 - y0) * k / s.ticks
        fx = x0 + (x1 - x0) * k / s.ticks
        out.append(f'<line x1="{s.margin_left}" x2="{s.margin_left + pw}" y1="{_fmt(py(fy))}" '
                   f'y2="{_fmt(py(fy))}" stroke="#e5e5e5"/>')
        out.append(f'<text x="{s.margin_left - 6}" y="{_fmt(py(fy) + 4)}" text-anchor="end">{fy:.3g}</text>')
        out.append(f'<text x="{_fmt(px(fx))}" y="{s.margin_top + ph + 16}" '
                   f'text-anchor="middle">{fx:.0f}</text>')
    out.append(f'<text x="{s.margin_left + pw / 2:.1f}" y="{s.height - 8}" '
               f'text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text transform="translate(14 {s.margin_top + ph / 2:.1f}) rotate(-90)" '
               f'text-anchor="middle">{escape(ylabel)}</text>')

    for i, (c, x, y) in enumerate(zip(curves, xs, ys)):
        color = PALETTE[i % len(PALETTE)]
        for sx, sy in _segments(x, y):
            pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(sx, sy))
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = s.margin_top + 14 + 18 * i
        lx = s.margin_left + pw + 12
        out.append(f'<line x1="{lx}" x2="{lx + 20}" y1="{ly}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(c.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_line_chart(path, curves: list[Curve], **kwargs) -> Path:
    path = Path(path)
    path.write_text(line_chart_svg(curves, **kwargs))
    return path
