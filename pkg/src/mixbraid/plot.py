"""Static SVG pictures: phase triangulations and root trajectories."""
from __future__ import annotations

import cmath
import math

from .fi import FiPath
from .toric import PhaseData, sub_problem

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"]


def _svg(width: int, height: int, body: list[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">')
    return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>'] + body + ["</svg>"])


def triangulation_svg(ph: PhaseData, scale: int = 80) -> str:
    """Height-one slice of the fan, drawn for at most two parts.

    Ray (d, N_t - d, e_t) sits at the point (d, t); each maximal simplex is
    a triangle or a segment through its rays.
    """
    sp = sub_problem(ph.G)
    if ph.G.s > 1:
        raise ValueError("triangulation plots need a partition with at most two parts")
    pts = [(d, t) for t, d in sp.coords]
    W = (max(x for x, _ in pts) + 2) * scale
    H = (max(y for _, y in pts) + 2) * scale

    def xy(i):
        x, y = pts[i]
        return (x + 1) * scale, H - (y + 1) * scale

    body = []
    for n, s in enumerate(ph.simplices):
        ids = sorted(s, key=lambda i: (pts[i][1], pts[i][0] if pts[i][1] == 0 else -pts[i][0]))
        col = _COLORS[n % len(_COLORS)]
        coords = " ".join(f"{x},{y}" for x, y in map(xy, ids))
        body.append(f'<polygon points="{coords}" fill="{col}" fill-opacity="0.25" '
                    f'stroke="black" stroke-width="2"/>')
    for i, lab in enumerate(sp.labels()):
        x, y = xy(i)
        body.append(f'<circle cx="{x}" cy="{y}" r="5" fill="black"/>')
        body.append(f'<text x="{x + 8}" y="{y - 8}" font-size="14">{lab}</text>')
    body.append(f'<text x="10" y="20" font-size="14">{ph.name()}</text>')
    return _svg(W, H, body)


def path_svg(path: FiPath, size: int = 480) -> str:
    """Root trajectories in log-polar form: radius log|zeta| shifted positive, angle arg zeta."""
    logs = [s.log_abs() for s in path.samples]
    lo = min(min(r) for r in logs)
    hi = max(max(r) for r in logs)
    span = (hi - lo) or 1.0
    c = size / 2

    def pos(z, lz):
        r = 0.1 + 0.85 * (lz - lo) / span
        a = cmath.phase(z)
        return c + r * c * math.cos(a), c - r * c * math.sin(a)

    body = [f'<line x1="0" y1="{c}" x2="{size}" y2="{c}" stroke="#ccc"/>',
            f'<line x1="{c}" y1="0" x2="{c}" y2="{size}" stroke="#ccc"/>']
    n = path.G.k + 1
    for x in range(n):
        pts = [pos(s.as_complex()[x], lz[x]) for s, lz in zip(path.samples, logs)]
        col = _COLORS[x % len(_COLORS)]
        d = " ".join(f"{a:.2f},{b:.2f}" for a, b in pts)
        body.append(f'<polyline points="{d}" fill="none" stroke="{col}" stroke-width="2"/>')
        body.append(f'<circle cx="{pts[0][0]:.2f}" cy="{pts[0][1]:.2f}" r="4" fill="{col}"/>')
        body.append(f'<text x="{pts[-1][0] + 6:.2f}" y="{pts[-1][1] - 6:.2f}" font-size="13">zeta{x}</text>')
    return _svg(size, size, body)
