"""Deterministic top-down SVG rendering of a plan.

Hand-built SVG 1.1 with fixed number formatting and a fixed palette keyed by
cluster index, so identical plans always produce byte-identical documents
(golden-file friendly).
"""

from __future__ import annotations

import math
from typing import Sequence

from .model import Plan, Target

_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)
_WIDTH = 800.0
_PAD = 0.4  # metres of margin around the drawing


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def cluster_color(index: int) -> str:
    return _PALETTE[index % len(_PALETTE)]


def render_svg(plan: Plan, targets: Sequence[Target]) -> str:
    """Floor-plane plot: targets by cluster colour, base arrows, base tour."""
    xs = [t.x for t in targets] + [c.base[0] for c in plan.clusters] + [plan.home_base[0]]
    ys = [t.y for t in targets] + [c.base[1] for c in plan.clusters] + [plan.home_base[1]]
    x_lo, x_hi = min(xs) - _PAD, max(xs) + _PAD
    y_lo, y_hi = min(ys) - _PAD, max(ys) + _PAD
    scale = _WIDTH / (x_hi - x_lo)
    height = (y_hi - y_lo) * scale

    def px(x: float, y: float) -> tuple[float, float]:
        return ((x - x_lo) * scale, (y_hi - y) * scale)  # world y grows upward

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(_WIDTH)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(_WIDTH)} {_fmt(height)}">',
        f'<rect x="0" y="0" width="{_fmt(_WIDTH)}" height="{_fmt(height)}" fill="#ffffff"/>',
    ]

    # Base tour polyline: home, bases in visit order, home.
    stops = [plan.home_base[:2]]
    stops += [plan.clusters[c].base[:2] for c in plan.base_sequence]
    stops.append(plan.home_base[:2])
    points = " ".join(f"{_fmt(px(x, y)[0])},{_fmt(px(x, y)[1])}" for x, y in stops)
    parts.append(
        f'<polyline points="{points}" fill="none" stroke="#999999" '
        'stroke-width="2" stroke-dasharray="6,4"/>'
    )

    cluster_of = {}
    for ci, cluster in enumerate(plan.clusters):
        for i in cluster.target_indices:
            cluster_of[i] = ci
    for i, t in enumerate(targets):
        x, y = px(t.x, t.y)
        parts.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" '
            f'fill="{cluster_color(cluster_of[i])}"/>'
        )

    # Home marker plus one orientation arrow per base pose.
    hx, hy = px(*plan.home_base[:2])
    parts.append(
        f'<rect x="{_fmt(hx - 6)}" y="{_fmt(hy - 6)}" width="12" height="12" '
        'fill="none" stroke="#333333" stroke-width="2"/>'
    )
    arrow = 0.3 * scale
    for ci, cluster in enumerate(plan.clusters):
        bx, by, bphi = cluster.base
        x0, y0 = px(bx, by)
        x1 = x0 + arrow * math.cos(bphi)
        y1 = y0 - arrow * math.sin(bphi)
        color = cluster_color(ci)
        parts.append(
            f'<circle cx="{_fmt(x0)}" cy="{_fmt(y0)}" r="6" fill="none" '
            f'stroke="{color}" stroke-width="2.5"/>'
        )
        parts.append(
            f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}" '
            f'stroke="{color}" stroke-width="2.5"/>'
        )
        # Arrowhead: two short back-swept strokes.
        for side in (1.0, -1.0):
            ang = bphi + math.pi + side * 0.5
            hx2 = x1 + 0.25 * arrow * math.cos(ang)
            hy2 = y1 - 0.25 * arrow * math.sin(ang)
            parts.append(
                f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(hx2)}" y2="{_fmt(hy2)}" '
                f'stroke="{color}" stroke-width="2.5"/>'
            )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
