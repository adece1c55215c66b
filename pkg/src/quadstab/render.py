"""SVG pictures of the horizontal foliation."""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .foliation import TrajectoryDecomposition

_STYLE = {
    "saddle": 'stroke="#d62728" stroke-width="2.5" fill="none"',
    "separating": 'stroke="#000000" stroke-width="1.2" fill="none"',
    "generic": 'stroke="#1f77b4" stroke-width="1" stroke-dasharray="6,4" fill="none"',
}


def _path(points: Iterable[complex], to_px) -> str:
    parts = []
    for i, z in enumerate(points):
        x, y = to_px(z)
        parts.append(f"{'M' if i == 0 else 'L'}{x:.2f},{y:.2f}")
    return " ".join(parts)


def _clip(poly: np.ndarray, radius: float) -> np.ndarray:
    inside = np.abs(poly) <= radius
    if inside.all():
        return poly
    idx = np.nonzero(~inside)[0]
    return poly[: idx[0] + 1] if idx[0] > 0 else poly[:1]


def render_svg(dec: TrajectoryDecomposition, size: int = 640) -> str:
    """Zeros as dots, saddles red, separating trajectories black, one dashed
    generic trajectory per strip, and direction ticks on the escape circle.

    The canvas spans 1.2 times the escape radius.
    """
    R = dec.r_escape
    half = 1.2 * R
    scale = size / (2 * half)
    d = dec.params.d

    def to_px(z: complex) -> tuple[float, float]:
        return (z.real + half) * scale, (half - z.imag) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="#ffffff"/>',
        f'<circle class="boundary" cx="{size / 2:.2f}" cy="{size / 2:.2f}" r="{R * scale:.2f}" '
        'stroke="#999999" stroke-width="0.8" fill="none"/>',
    ]
    for strip in dec.strips:
        out.append(f'<path class="generic" {_STYLE["generic"]} d="{_path(_clip(strip.generic, R), to_px)}"/>')
    for sep in dec.separating:
        out.append(f'<path class="separating" {_STYLE["separating"]} d="{_path(sep.polyline, to_px)}"/>')
    for _, _, poly in dec.saddles:
        out.append(f'<path class="saddle" {_STYLE["saddle"]} d="{_path(poly, to_px)}"/>')
    for j in range(d):
        ang = 2 * math.pi * (j + dec.phase) / d
        u = complex(math.cos(ang), math.sin(ang))
        x1, y1 = to_px(0.97 * R * u)
        x2, y2 = to_px(1.06 * R * u)
        tx, ty = to_px(1.12 * R * u)
        out.append(f'<line class="tick" x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                   'stroke="#555555" stroke-width="1.5"/>')
        out.append(f'<text x="{tx:.2f}" y="{ty:.2f}" font-size="11" text-anchor="middle" '
                   f'dominant-baseline="middle">{j}</text>')
    for z in dec.roots:
        x, y = to_px(z)
        out.append(f'<circle class="zero" cx="{x:.2f}" cy="{y:.2f}" r="4" fill="#2ca02c"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
