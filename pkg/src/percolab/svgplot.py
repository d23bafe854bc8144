"""Dependency-free single-curve SVG output for threshold scans."""

from __future__ import annotations

from typing import Sequence

WIDTH = 640
HEIGHT = 420
MARGIN = 56


def line_chart(points: Sequence[tuple], title: str = "",
               xlabel: str = "p", ylabel: str = "probability") -> str:
    """Static line+scatter chart for (x, y) pairs, y expected in [0, 1]."""
    if not points:
        raise ValueError("no points to plot")
    xs = [p[0] for p in points]
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    y_lo, y_hi = 0.0, 1.0
    inner_w = WIDTH - 2 * MARGIN
    inner_h = HEIGHT - 2 * MARGIN

    def sx(x):
        return MARGIN + (x - x_lo) / (x_hi - x_lo) * inner_w

    def sy(y):
        return HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * inner_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        x = x_lo + frac * (x_hi - x_lo)
        y = y_lo + frac * (y_hi - y_lo)
        parts.append(f'<text x="{sx(x):.1f}" y="{HEIGHT - MARGIN + 18}" '
                     f'font-size="11" text-anchor="middle">{x:.3f}</text>')
        parts.append(f'<text x="{MARGIN - 8}" y="{sy(y):.1f}" font-size="11" '
                     f'text-anchor="end" dominant-baseline="middle">{y:.2f}</text>')
    poly = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in points)
    parts.append(f'<polyline points="{poly}" fill="none" stroke="steelblue" '
                 f'stroke-width="1.5"/>')
    for x, y in points:
        parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" '
                     f'fill="steelblue"/>')
    if title:
        parts.append(f'<text x="{WIDTH / 2:.1f}" y="{MARGIN - 20}" font-size="14" '
                     f'text-anchor="middle">{title}</text>')
    parts.append(f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 12}" font-size="12" '
                 f'text-anchor="middle">{xlabel}</text>')
    parts.append(f'<text x="16" y="{HEIGHT / 2:.1f}" font-size="12" '
                 f'text-anchor="middle" transform="rotate(-90 16 {HEIGHT / 2:.1f})">'
                 f'{ylabel}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
