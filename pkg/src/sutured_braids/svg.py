"""SVG heatmap of the Morse function with critical points and flow lines.

Plain string assembly with fixed number formatting, so the same inputs give
the same bytes.
"""

from __future__ import annotations

import math

import numpy as np

from .morse_engine import MorseReport, eval_h

__all__ = ["heatmap_svg"]

_LOW = (49, 54, 149)
_MID = (247, 247, 247)
_HIGH = (165, 0, 38)


def _color(t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    if t < 0.5:
        c0, c1, s = _LOW, _MID, 2 * t
    else:
        c0, c1, s = _MID, _HIGH, 2 * t - 1
    r, g, b = (round(x + (y - x) * s) for x, y in zip(c0, c1))
    return f"#{r:02x}{g:02x}{b:02x}"


def _split_wrapped(samples: np.ndarray) -> list[np.ndarray]:
    """Wrap theta into [0, 2 pi) and cut the polyline where it jumps."""
    th = np.mod(samples[:, 1], 2 * math.pi)
    pts = np.column_stack([samples[:, 0], th])
    cuts = np.nonzero(np.abs(np.diff(th)) > math.pi)[0] + 1
    return [seg for seg in np.split(pts, cuts) if len(seg) > 1]


def heatmap_svg(report: MorseReport, nx: int = 160, ny: int = 64,
                width: int = 800, height: int = 320) -> str:
    p = report.problem
    a_max = p.U + p.x_max
    a_edges = np.linspace(-a_max, a_max, nx + 1)
    t_edges = np.linspace(0.0, 2 * math.pi, ny + 1)
    ac = 0.5 * (a_edges[1:] + a_edges[:-1])
    tc = 0.5 * (t_edges[1:] + t_edges[:-1])
    A, T = np.meshgrid(ac, tc)
    H = eval_h(p, A, T)
    lo, hi = float(H.min()), float(H.max())
    span = hi - lo if hi > lo else 1.0

    def sx(a):
        return (a + a_max) / (2 * a_max) * width

    def sy(t):
        return height - t / (2 * math.pi) * height

    cw, ch = width / nx, height / ny
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height + 40}" '
        f'viewBox="0 0 {width} {height + 40}">',
        f'<title>h for k={p.k}, U={p.U:g}, eps0={p.eps0:g}, eps1={p.eps1:g}</title>',
        '<g shape-rendering="crispEdges">',
    ]
    for j in range(ny):
        for i in range(nx):
            out.append(f'<rect x="{i * cw:.2f}" y="{height - (j + 1) * ch:.2f}" '
                       f'width="{cw:.2f}" height="{ch:.2f}" '
                       f'fill="{_color((H[j, i] - lo) / span)}"/>')
    out.append("</g>")
    for trajs in report.trajectories.values():
        for t in trajs:
            for seg in _split_wrapped(t.samples):
                pts = " ".join(f"{sx(a):.2f},{sy(th):.2f}" for a, th in seg)
                out.append(f'<polyline points="{pts}" fill="none" stroke="#111111" '
                           f'stroke-width="1.5"/>')
    for c in report.critical_points:
        out.append(f'<circle cx="{sx(c.a):.2f}" cy="{sy(c.theta):.2f}" r="5" '
                   f'fill="#ffd700" stroke="#000000"/>')
        out.append(f'<text x="{sx(c.a) + 7:.2f}" y="{sy(c.theta) - 7:.2f}" '
                   f'font-family="monospace" font-size="12">{c.tier} (index {c.index})</text>')
    out.append(f'<text x="4" y="{height + 16}" font-family="monospace" font-size="12">'
               f'a in [{-a_max:.3f}, {a_max:.3f}] (horizontal), theta in [0, 2pi] (vertical); '
               f'h in [{lo:.4f}, {hi:.4f}]</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
