"""Minimal self-contained SVG scatter plots with a least-squares line.

Output depends only on the input numbers, so identical data gives identical
bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from html import escape
from typing import Sequence

WIDTH = 420
HEIGHT = 320
MARGIN_LEFT = 62
MARGIN_RIGHT = 18
MARGIN_TOP = 40
MARGIN_BOTTOM = 52


def least_squares(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """(slope, intercept) of the ordinary least-squares line y = slope * x + intercept."""
    n = len(xs)
    if n != len(ys) or n < 2:
        raise ValueError("need at least two paired points")
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise ValueError("x values are all equal; slope undefined")
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return slope, my - slope * mx


def nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi < lo:
        lo, hi = hi, lo
    if hi == lo:
        pad = abs(lo) * 0.1 or 1.0
        lo, hi = lo - pad, hi + pad
    raw = (hi - lo) / max(1, target)
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 2.5, 5, 10):
        step = mult * mag
        if step >= raw:
            break
    start = math.floor(lo / step) * step
    stop = math.ceil(hi / step) * step
    count = int(round((stop - start) / step))
    return [round(start + i * step, 10) for i in range(count + 1)]


def _fmt(v: float) -> str:
    """Coordinate formatting: two decimals, no negative zero."""
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _tick_label(v: float) -> str:
    s = f"{v:.6g}"
    return "0" if s == "-0" else s


@dataclass(frozen=True)
class Panel:
    title: str
    x_label: str
    y_label: str
    points: tuple[tuple[str, float, float], ...]  # (label, x, y)
    fit: bool = True


def _panel_body(panel: Panel, ox: float, oy: float) -> list[str]:
    xs = [p[1] for p in panel.points]
    ys = [p[2] for p in panel.points]
    xt = nice_ticks(min(xs), max(xs))
    yt = nice_ticks(min(ys), max(ys))
    x0, x1, y0, y1 = xt[0], xt[-1], yt[0], yt[-1]
    pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    left, top = ox + MARGIN_LEFT, oy + MARGIN_TOP

    def sx(v):
        return left + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return top + ph - (v - y0) / (y1 - y0) * ph

    out = [f'<g class="panel">']
    out.append(
        f'<text x="{_fmt(ox + WIDTH / 2)}" y="{_fmt(oy + 22)}" text-anchor="middle" '
        f'font-size="14" font-weight="bold">{escape(panel.title)}</text>'
    )
    out.append(
        f'<rect x="{_fmt(left)}" y="{_fmt(top)}" width="{_fmt(pw)}" height="{_fmt(ph)}" '
        f'fill="none" stroke="#444" stroke-width="1"/>'
    )
    for t in xt:
        x = sx(t)
        out.append(f'<line x1="{_fmt(x)}" y1="{_fmt(top + ph)}" x2="{_fmt(x)}" y2="{_fmt(top + ph + 4)}" stroke="#444"/>')
        out.append(
            f'<text x="{_fmt(x)}" y="{_fmt(top + ph + 16)}" text-anchor="middle" font-size="10">{_tick_label(t)}</text>'
        )
    for t in yt:
        y = sy(t)
        out.append(f'<line x1="{_fmt(left - 4)}" y1="{_fmt(y)}" x2="{_fmt(left)}" y2="{_fmt(y)}" stroke="#444"/>')
        out.append(
            f'<text x="{_fmt(left - 6)}" y="{_fmt(y + 3)}" text-anchor="end" font-size="10">{_tick_label(t)}</text>'
        )
    out.append(
        f'<text x="{_fmt(left + pw / 2)}" y="{_fmt(oy + HEIGHT - 12)}" text-anchor="middle" '
        f'font-size="12">{escape(panel.x_label)}</text>'
    )
    cy = top + ph / 2
    out.append(
        f'<text x="{_fmt(ox + 16)}" y="{_fmt(cy)}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 {_fmt(ox + 16)} {_fmt(cy)})">{escape(panel.y_label)}</text>'
    )
    if panel.fit and len(set(xs)) > 1:
        slope, intercept = least_squares(xs, ys)
        # clip the fitted line to the plotting box
        ya, yb = slope * x0 + intercept, slope * x1 + intercept
        out.append(
            f'<clipPath id="clip-{_fmt(ox)}-{_fmt(oy)}"><rect x="{_fmt(left)}" y="{_fmt(top)}" '
            f'width="{_fmt(pw)}" height="{_fmt(ph)}"/></clipPath>'
        )
        out.append(
            f'<line class="fit" x1="{_fmt(sx(x0))}" y1="{_fmt(sy(ya))}" x2="{_fmt(sx(x1))}" y2="{_fmt(sy(yb))}" '
            f'stroke="#c0392b" stroke-width="1.5" stroke-dasharray="5,3" clip-path="url(#clip-{_fmt(ox)}-{_fmt(oy)})"/>'
        )
    for label, x, y in panel.points:
        out.append(
            f'<circle class="point" cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="4" fill="#2e86c1" '
            f'stroke="#1b4f72"><title>{escape(label)}: ({x:g}, {y:g})</title></circle>'
        )
    out.append("</g>")
    return out


def render_svg(panels: Sequence[Panel], columns: int = 1) -> str:
    columns = max(1, min(columns, len(panels)))
    rows = math.ceil(len(panels) / columns)
    w, h = WIDTH * columns, HEIGHT * rows
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" '
        f'font-family="sans-serif">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
    ]
    for i, panel in enumerate(panels):
        ox, oy = (i % columns) * WIDTH, (i // columns) * HEIGHT
        lines.extend(_panel_body(panel, ox, oy))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
