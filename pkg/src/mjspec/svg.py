"""Minimal self-contained SVG line plots.

Axes are fixed by the caller so that panels of one figure share a scale.
Output depends only on the data, which keeps it byte-stable.
"""

from __future__ import annotations

from typing import Sequence, TextIO

import numpy as np

__all__ = ["write_line_plot"]

_COLORS = ("#1f77b4", "#d62728", "#ff7f0e", "#9467bd", "#2ca02c", "#8c564b", "#17becf")
_W, _H = 480, 360
_ML, _MR, _MT, _MB = 60, 20, 30, 45


def _ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    return np.linspace(lo, hi, n)


def write_line_plot(
    stream: TextIO,
    x: Sequence[float],
    series: Sequence[tuple[str, Sequence[float]]],
    xlim: tuple[float, float],
    ylim: tuple[float, float],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
) -> None:
    """Write one panel; ``series`` is a list of (label, y-values)."""
    x0, x1 = xlim
    y0, y1 = ylim
    if not (x1 > x0 and y1 > y0):
        raise ValueError("axis limits must be increasing")
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def px(v):
        return _ML + (v - x0) / (x1 - x0) * pw

    def py(v):
        return _MT + (1 - (v - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="11">',
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<text x="{px(t):.2f}" y="{_MT + ph + 15}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<text x="{_ML - 5}" y="{py(t) + 4:.2f}" text-anchor="end">{t:.3g}</text>')
    if title:
        out.append(f'<text x="{_W / 2}" y="18" text-anchor="middle">{title}</text>')
    if xlabel:
        out.append(f'<text x="{_ML + pw / 2}" y="{_H - 8}" text-anchor="middle">{xlabel}</text>')
    if ylabel:
        out.append(
            f'<text x="14" y="{_MT + ph / 2}" text-anchor="middle" '
            f'transform="rotate(-90 14 {_MT + ph / 2})">{ylabel}</text>'
        )
    xs = np.asarray(x, dtype=float)
    for i, (label, ys) in enumerate(series):
        ys = np.clip(np.asarray(ys, dtype=float), y0, y1)
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(xs, ys))
        color = _COLORS[i % len(_COLORS)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(
            f'<text x="{_ML + pw - 5}" y="{_MT + 14 + 13 * i}" text-anchor="end" '
            f'fill="{color}">{label}</text>'
        )
    out.append("</svg>")
    stream.write("\n".join(out) + "\n")
