"""Self-contained SVG phase portraits."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .dynamics import Trajectory
from .model import Params, equilibria

MARGIN = 48


def _bounds(params: Params, trajs: Sequence[Trajectory]) -> tuple[float, float, float, float]:
    pts = [np.array([[e.point.u, e.point.v]]) for e in equilibria(params)]
    pts += [t.y for t in trajs if len(t.y)]
    allp = np.vstack(pts)
    # robust to backward orbits that run far away
    lo = np.percentile(allp, 1, axis=0)
    hi = np.percentile(allp, 99, axis=0)
    lo = np.minimum(lo, allp[: len(equilibria(params))].min(axis=0))
    hi = np.maximum(hi, allp[: len(equilibria(params))].max(axis=0))
    span = np.maximum(hi - lo, 1e-6)
    lo, hi = lo - 0.08 * span, hi + 0.08 * span
    return float(lo[0]), float(hi[0]), float(max(lo[1], 0.0)), float(hi[1])


def portrait_svg(
    params: Params,
    trajs: Sequence[Trajectory],
    width: int = 640,
    height: int = 480,
    bounds: tuple[float, float, float, float] | None = None,
    title: str | None = None,
) -> str:
    u0, u1, v0, v1 = bounds if bounds is not None else _bounds(params, trajs)
    pw, ph = width - 2 * MARGIN, height - 2 * MARGIN

    def sx(u: float) -> float:
        return MARGIN + (u - u0) / (u1 - u0) * pw

    def sy(v: float) -> float:
        return height - MARGIN - (v - v0) / (v1 - v0) * ph

    def poly(us: np.ndarray, vs: np.ndarray) -> str:
        keep = (us >= u0) & (us <= u1) & (vs >= v0) & (vs <= v1)
        segs, cur = [], []
        for k, (a, b) in zip(keep, zip(us, vs)):
            if k:
                cur.append(f"{sx(a):.2f},{sy(b):.2f}")
            elif cur:
                segs.append(cur)
                cur = []
        if cur:
            segs.append(cur)
        return "".join(f'<polyline points="{" ".join(s)}"/>' for s in segs if len(s) > 1)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        "<style>"
        ".ax{stroke:#222;stroke-width:1;fill:none}"
        ".fw polyline{stroke:#1f5fa8;stroke-width:1;fill:none}"
        ".bw polyline{stroke:#999;stroke-width:1;fill:none;stroke-dasharray:3 2}"
        ".nf polyline{stroke:#c0392b;stroke-width:1.5;fill:none}"
        ".ng polyline{stroke:#27ae60;stroke-width:1.5;fill:none}"
        "text{font-family:sans-serif;font-size:11px;fill:#222}"
        "</style>",
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect class="ax" x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}"/>',
    ]
    us = np.linspace(u0, u1, 400)
    parts.append(f'<g class="nf">{poly(us, params.beta * us)}</g>')
    parts.append(f'<g class="ng">{poly(us, (params.b + us * us) / params.d)}</g>')
    for t in trajs:
        cls = "fw" if t.direction > 0 else "bw"
        parts.append(f'<g class="{cls}">{poly(t.y[:, 0], t.y[:, 1])}</g>')
    for e in equilibria(params):
        x, y = sx(e.point.u), sy(e.point.v)
        if MARGIN <= x <= width - MARGIN and MARGIN <= y <= height - MARGIN:
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="black"/>')
            parts.append(f'<text x="{x + 6:.2f}" y="{y - 6:.2f}">{e.label}</text>')
    parts.append(f'<text x="{width / 2:.0f}" y="{height - 12}" text-anchor="middle">u</text>')
    parts.append(f'<text x="14" y="{height / 2:.0f}">v</text>')
    parts.append(f'<text x="{MARGIN}" y="{height - MARGIN + 14}">{u0:.4g}</text>')
    parts.append(f'<text x="{width - MARGIN}" y="{height - MARGIN + 14}" text-anchor="end">{u1:.4g}</text>')
    parts.append(f'<text x="{MARGIN - 4}" y="{height - MARGIN}" text-anchor="end">{v0:.4g}</text>')
    parts.append(f'<text x="{MARGIN - 4}" y="{MARGIN + 4}" text-anchor="end">{v1:.4g}</text>')
    label = title or "c={:g} beta={:g} b={:g} d={:g}".format(params.c, params.beta, params.b, params.d)
    parts.append(f'<text x="{MARGIN}" y="{MARGIN - 10}">{escape(label)}</text>')
    parts.append(
        f'<text x="{width - MARGIN}" y="{MARGIN - 10}" text-anchor="end">'
        "red: v = beta u, green: v = (b + u^2)/d</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
