"""Minimal static SVG line charts for the planner reports.

Hand-rolled on purpose: the plot files are plain artifacts of a run, not an
interactive surface, and keeping them dependency-free makes output
deterministic byte for byte.
"""

from __future__ import annotations

import math

__all__ = ["Series", "Panel", "render_panels"]

_MARGIN_L = 64.0
_MARGIN_R = 16.0
_MARGIN_T = 28.0
_MARGIN_B = 34.0
_PANEL_W = 760.0
_PANEL_H = 180.0
_GAP = 26.0


class Series:
    def __init__(self, label: str, xs, ys, color: str, dash: str | None = None):
        self.label = label
        self.xs = list(map(float, xs))
        self.ys = list(map(float, ys))
        self.color = color
        self.dash = dash


class Panel:
    def __init__(self, ylabel: str, series: list[Series], hlines=()):
        self.ylabel = ylabel
        self.series = series
        self.hlines = list(map(float, hlines))


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if raw <= step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 10))
        t += step
    return ticks


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def render_panels(panels: list[Panel], title: str, xlabel: str) -> str:
    """Stacked panels sharing an x axis; returns the SVG document text."""
    n = len(panels)
    width = _MARGIN_L + _PANEL_W + _MARGIN_R
    height = _MARGIN_T + n * _PANEL_H + (n - 1) * _GAP + _MARGIN_B

    x_lo = min(min(s.xs) for p in panels for s in p.series if s.xs)
    x_hi = max(max(s.xs) for p in panels for s in p.series if s.xs)
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
    ]

    def sx(x: float) -> float:
        return _MARGIN_L + (x - x_lo) / (x_hi - x_lo) * _PANEL_W

    for idx, panel in enumerate(panels):
        top = _MARGIN_T + idx * (_PANEL_H + _GAP)
        vals = [v for s in panel.series for v in s.ys] + panel.hlines
        y_lo, y_hi = min(vals), max(vals)
        pad = 0.06 * (y_hi - y_lo or 1.0)
        y_lo -= pad
        y_hi += pad

        def sy(y: float) -> float:
            return top + _PANEL_H - (y - y_lo) / (y_hi - y_lo) * _PANEL_H

        out.append(f'<rect x="{_MARGIN_L}" y="{top:.1f}" width="{_PANEL_W}" '
                   f'height="{_PANEL_H}" fill="none" stroke="#888"/>')
        for ty in _nice_ticks(y_lo, y_hi):
            y = sy(ty)
            out.append(f'<line x1="{_MARGIN_L}" y1="{y:.2f}" '
                       f'x2="{_MARGIN_L + _PANEL_W}" y2="{y:.2f}" '
                       f'stroke="#eee"/>')
            out.append(f'<text x="{_MARGIN_L - 6}" y="{y + 4:.2f}" '
                       f'text-anchor="end" font-family="sans-serif" '
                       f'font-size="10">{_fmt(ty)}</text>')
        for hy in panel.hlines:
            y = sy(hy)
            out.append(f'<line x1="{_MARGIN_L}" y1="{y:.2f}" '
                       f'x2="{_MARGIN_L + _PANEL_W}" y2="{y:.2f}" '
                       f'stroke="#555" stroke-dasharray="6 4"/>')
        for s in panel.series:
            pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}"
                           for x, y in zip(s.xs, s.ys))
            dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
            out.append(f'<polyline points="{pts}" fill="none" '
                       f'stroke="{s.color}" stroke-width="1.6"{dash}/>')
        out.append(f'<text x="14" y="{top + _PANEL_H / 2:.1f}" '
                   f'font-family="sans-serif" font-size="11" '
                   f'transform="rotate(-90 14 {top + _PANEL_H / 2:.1f})" '
                   f'text-anchor="middle">{panel.ylabel}</text>')

    axis_y = _MARGIN_T + n * _PANEL_H + (n - 1) * _GAP
    for tx in _nice_ticks(x_lo, x_hi):
        x = sx(tx)
        out.append(f'<line x1="{x:.2f}" y1="{axis_y:.1f}" x2="{x:.2f}" '
                   f'y2="{axis_y + 4:.1f}" stroke="#555"/>')
        out.append(f'<text x="{x:.2f}" y="{axis_y + 16:.1f}" '
                   f'text-anchor="middle" font-family="sans-serif" '
                   f'font-size="10">{_fmt(tx)}</text>')
    out.append(f'<text x="{_MARGIN_L + _PANEL_W / 2:.1f}" '
               f'y="{height - 8:.1f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">{xlabel}</text>')

    legend_x = _MARGIN_L + 8
    legend_y = _MARGIN_T + 6
    seen = []
    for s in panels[0].series:
        if s.label in [t[0] for t in seen]:
            continue
        seen.append((s.label, s.color))
    for i, (label, color) in enumerate(seen):
        x0 = legend_x + i * 120
        out.append(f'<line x1="{x0}" y1="{legend_y + 6}" x2="{x0 + 22}" '
                   f'y2="{legend_y + 6}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{x0 + 28}" y="{legend_y + 10}" '
                   f'font-family="sans-serif" font-size="11">{label}</text>')
    out.append("</svg>")
    return "\n".join(out)
