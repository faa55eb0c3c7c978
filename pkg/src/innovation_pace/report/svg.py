"""Plain SVG 1.1 line charts rendered from report CSVs.

The chart only draws what the CSV holds: x is the row label column, y the
chosen value columns. Log scale is used when positive values span more than
two decades, matching how pace series are usually displayed.
"""

from __future__ import annotations

import math
from html import escape
from pathlib import Path

from .table import Table, parse_cell, format_cell

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")

W, H = 900, 480
LEFT, RIGHT, TOP, BOTTOM = 80, 180, 48, 72


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_svg(table: Table) -> str:
    cols = [c for c in table.value_columns if c in table.header]
    idx = [table.header.index(c) for c in cols]
    labels = [format_cell(r[0]) for r in table.rows]
    series = [[parse_cell(format_cell(r[i])) for r in table.rows] for i in idx]
    finite = [v for s in series for v in s if v is not None and math.isfinite(v)]
    positive = [v for v in finite if v > 0]
    log = bool(positive) and len(positive) == len(finite) and max(positive) / min(positive) > 100

    if log:
        lo = math.floor(math.log10(min(positive)))
        hi = math.ceil(math.log10(max(positive)))
        hi = hi if hi > lo else lo + 1
        ticks = [10.0**e for e in range(lo, hi + 1)]

        def ty(v: float) -> float:
            return (math.log10(v) - lo) / (hi - lo)
    else:
        lo = min(finite + [0.0])
        hi = max(finite + [0.0])
        hi = hi if hi > lo else lo + 1.0
        ticks = [lo + (hi - lo) * k / 4 for k in range(5)]

        def ty(v: float) -> float:
            return (v - lo) / (hi - lo)

    pw, ph = W - LEFT - RIGHT, H - TOP - BOTTOM
    n = len(labels)

    def px(i: int) -> float:
        return LEFT + (pw * i / (n - 1) if n > 1 else pw / 2)

    def py(v: float) -> float:
        return TOP + ph * (1 - ty(v))

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
        f'<text x="{LEFT}" y="28" font-family="sans-serif" font-size="16">{escape(table.name)}</text>',
        f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}" stroke="#000"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}" stroke="#000"/>',
    ]
    for t in ticks:
        y = _fmt(py(t))
        out.append(f'<line x1="{LEFT - 4}" y1="{y}" x2="{LEFT + pw}" y2="{y}" stroke="#ddd"/>')
        out.append(f'<text x="{LEFT - 8}" y="{y}" text-anchor="end" font-family="sans-serif" '
                   f'font-size="11">{escape(f"{t:.4g}")}</text>')
    step = max(1, math.ceil(n / 12))
    for i in range(0, n, step):
        x = _fmt(px(i))
        out.append(f'<text x="{x}" y="{TOP + ph + 18}" text-anchor="end" font-family="sans-serif" '
                   f'font-size="11" transform="rotate(-40 {x} {TOP + ph + 18})">{escape(labels[i])}</text>')
    for k, (name, values) in enumerate(zip(cols, series)):
        color = PALETTE[k % len(PALETTE)]
        segment: list[str] = []
        segments: list[list[str]] = []
        for i, v in enumerate(values):
            if v is None or not math.isfinite(v) or (log and v <= 0):
                if segment:
                    segments.append(segment)
                segment = []
                continue
            segment.append(f"{_fmt(px(i))},{_fmt(py(v))}")
        if segment:
            segments.append(segment)
        for seg in segments:
            if len(seg) == 1:
                cx, cy = seg[0].split(",")
                out.append(f'<circle cx="{cx}" cy="{cy}" r="2.5" fill="{color}"/>')
            else:
                out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{" ".join(seg)}"/>')
        ly = TOP + 16 * k + 8
        out.append(f'<line x1="{LEFT + pw + 12}" y1="{ly}" x2="{LEFT + pw + 32}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{LEFT + pw + 38}" y="{ly + 4}" font-family="sans-serif" font-size="11">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(table: Table, directory: Path) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{table.name}.svg"
    path.write_bytes(render_svg(table).encode("utf-8"))
    return path
