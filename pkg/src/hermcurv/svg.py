"""Minimal self-contained SVG line plots."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _ticks(lo: float, hi: float, count: int = 5) -> np.ndarray:
    return np.linspace(lo, hi, count)


def line_plot(x, series: dict, title: str, xlabel: str, width: int = 640,
              height: int = 400) -> str:
    """SVG 1.1 document with one polyline per entry of ``series``."""
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in series.items()}
    left, right, top, bottom = 70, 20, 40, 50
    pw, ph = width - left - right, height - top - bottom
    x0, x1 = float(x.min()), float(x.max())
    y0 = min(float(v.min()) for v in ys.values())
    y1 = max(float(v.max()) for v in ys.values())
    if y1 - y0 < 1e-12 * max(1.0, abs(y0)):
        pad = max(1e-3, 0.05 * abs(y0))
        y0, y1 = y0 - pad, y1 + pad
    span_x = x1 - x0 or 1.0

    def sx(v):
        return left + (v - x0) / span_x * pw

    def sy(v):
        return top + (y1 - v) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">{escape(title)}</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for tx in _ticks(x0, x1):
        out.append(f'<text x="{sx(tx):.1f}" y="{top + ph + 16}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{tx:.3g}</text>')
    for ty in _ticks(y0, y1):
        out.append(f'<text x="{left - 6}" y="{sy(ty) + 4:.1f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{ty:.4g}</text>')
        out.append(f'<line x1="{left}" y1="{sy(ty):.1f}" x2="{left + pw}" y2="{sy(ty):.1f}" '
                   'stroke="#dddddd"/>')
    if y0 < 0 < y1:
        out.append(f'<line x1="{left}" y1="{sy(0.0):.1f}" x2="{left + pw}" y2="{sy(0.0):.1f}" '
                   'stroke="#888888" stroke-dasharray="4 3"/>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 12}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">{escape(xlabel)}</text>')
    for i, (name, v) in enumerate(ys.items()):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, v))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{left + 10}" y="{top + 16 + 15 * i}" fill="{color}" '
                   f'font-family="sans-serif" font-size="12">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
