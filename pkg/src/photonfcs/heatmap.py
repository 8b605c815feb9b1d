"""Minimal deterministic SVG heatmap with a sign-diverging palette.

Hand-rolled so the output bytes depend only on the data: no library version
strings, hashes, or timestamps.  Zero maps to white, negative values to blue,
positive to red, with the scale symmetric about zero.
"""

import math

import numpy as np

_NEG = (33, 102, 172)   # blue
_POS = (178, 24, 43)    # red
_BAD = (160, 160, 160)  # failed grid points

CELL = 14
MARGIN_L = 70
MARGIN_B = 46
MARGIN_T = 34
MARGIN_R = 86


def _color(value, vmax):
    if not math.isfinite(value):
        return "#%02x%02x%02x" % _BAD
    t = 0.0 if vmax == 0 else max(-1.0, min(1.0, value / vmax))
    base = _NEG if t < 0 else _POS
    a = abs(t)
    rgb = tuple(round(255 + (c - 255) * a) for c in base)
    return "#%02x%02x%02x" % rgb


def _ticks(values, n=5):
    idx = np.linspace(0, len(values) - 1, min(n, len(values))).round().astype(int)
    return [(int(i), values[int(i)]) for i in idx]


def write_heatmap_svg(path, grid, axis1_values, axis2_values, axis1_name, axis2_name, title):
    """Render grid[i, j] (axis1 on x, axis2 on y, origin bottom-left)."""
    grid = np.asarray(grid, dtype=float)
    n1, n2 = grid.shape
    finite = grid[np.isfinite(grid)]
    vmax = float(np.max(np.abs(finite))) if finite.size else 1.0
    if vmax == 0.0:
        vmax = 1.0
    width = MARGIN_L + n1 * CELL + MARGIN_R
    height = MARGIN_T + n2 * CELL + MARGIN_B

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{MARGIN_L}" y="20" font-family="sans-serif" font-size="13">{title}</text>',
    ]
    for i in range(n1):
        for j in range(n2):
            x = MARGIN_L + i * CELL
            y = MARGIN_T + (n2 - 1 - j) * CELL
            parts.append(
                f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" '
                f'fill="{_color(grid[i, j], vmax)}"/>'
            )
    # axis labels and ticks
    y0 = MARGIN_T + n2 * CELL
    for i, v in _ticks(axis1_values):
        x = MARGIN_L + i * CELL + CELL // 2
        parts.append(
            f'<text x="{x}" y="{y0 + 14}" font-family="sans-serif" font-size="10" '
            f'text-anchor="middle">{v:.3g}</text>'
        )
    for j, v in _ticks(axis2_values):
        y = MARGIN_T + (n2 - 1 - j) * CELL + CELL // 2 + 3
        parts.append(
            f'<text x="{MARGIN_L - 6}" y="{y}" font-family="sans-serif" font-size="10" '
            f'text-anchor="end">{v:.3g}</text>'
        )
    parts.append(
        f'<text x="{MARGIN_L + n1 * CELL // 2}" y="{y0 + 32}" font-family="sans-serif" '
        f'font-size="12" text-anchor="middle">{axis1_name}</text>'
    )
    parts.append(
        f'<text x="16" y="{MARGIN_T + n2 * CELL // 2}" font-family="sans-serif" font-size="12" '
        f'text-anchor="middle" transform="rotate(-90 16 {MARGIN_T + n2 * CELL // 2})">'
        f"{axis2_name}</text>"
    )
    # colorbar
    bar_x = MARGIN_L + n1 * CELL + 18
    bar_h = n2 * CELL
    steps = 32
    for k in range(steps):
        frac = 1.0 - 2.0 * (k + 0.5) / steps  # +vmax at top
        y = MARGIN_T + k * bar_h / steps
        parts.append(
            f'<rect x="{bar_x}" y="{y:.2f}" width="12" height="{bar_h / steps + 0.5:.2f}" '
            f'fill="{_color(frac * vmax, vmax)}"/>'
        )
    for frac, label in ((1.0, f"{vmax:.2e}"), (0.0, "0"), (-1.0, f"{-vmax:.2e}")):
        y = MARGIN_T + (1.0 - frac) / 2.0 * bar_h
        parts.append(
            f'<text x="{bar_x + 16}" y="{y + 4:.2f}" font-family="sans-serif" '
            f'font-size="9">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
