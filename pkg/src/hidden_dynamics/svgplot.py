"""Deterministic SVG phase portraits.

Hand-rolled rather than delegated to a plotting library so the byte
output is a pure function of the data: fixed float formatting, no
timestamps, no generated ids.  Style convention: trajectories solid,
nullclines dotted, certificate segments dashed, box edges light solid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["PhasePlot", "phase_portrait_svg"]


def _fmt(x: float) -> str:
    return f"{x:.4f}".rstrip("0").rstrip(".")


@dataclass
class PhasePlot:
    """Accumulates geometry in world coordinates, renders to SVG."""

    xlim: tuple[float, float] = (-1.3, 1.3)
    ylim: tuple[float, float] = (-1.3, 1.3)
    size: int = 480
    title: str = ""

    def __post_init__(self):
        self._body: list[str] = []
        self._margin = 34.0

    # -- world-to-pixel --------------------------------------------------

    def _px(self, x: float, y: float) -> tuple[float, float]:
        m, s = self._margin, self.size
        w = s - 2 * m
        fx = (x - self.xlim[0]) / (self.xlim[1] - self.xlim[0])
        fy = (y - self.ylim[0]) / (self.ylim[1] - self.ylim[0])
        return m + fx * w, s - m - fy * w

    def _path(self, pts, style: str, close: bool = False):
        if len(pts) < 2:
            return
        coords = []
        last = None
        for x, y in pts:
            if not (math.isfinite(x) and math.isfinite(y)):
                last = None
                continue
            px, py = self._px(x, y)
            cmd = "M" if last is None else "L"
            coords.append(f"{cmd}{_fmt(px)} {_fmt(py)}")
            last = (px, py)
        if close:
            coords.append("Z")
        self._body.append(f'<path d="{" ".join(coords)}" {style}/>')

    # -- layers ----------------------------------------------------------

    def box(self, lo: float = -1.0, hi: float = 1.0):
        pts = [(lo, lo), (hi, lo), (hi, hi), (lo, hi), (lo, lo)]
        self._path(pts, 'fill="none" stroke="#999999" stroke-width="1"')

    def trajectory(self, pts, color: str = "#1f5fb4", width: float = 1.3):
        self._path(pts, f'fill="none" stroke="{color}" stroke-width="{width}"')

    def nullcline(self, pts, color: str = "#555555"):
        self._path(pts, f'fill="none" stroke="{color}" stroke-width="1" '
                        'stroke-dasharray="1.5 3"')

    def segments(self, pts, color: str = "#b44a1f"):
        self._path(pts, f'fill="none" stroke="{color}" stroke-width="1.4" '
                        'stroke-dasharray="6 4"')

    def marker(self, x: float, y: float, color: str = "#111111", r: float = 3.0,
               hollow: bool = False):
        px, py = self._px(x, y)
        fill = "none" if hollow else color
        self._body.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{_fmt(r)}" '
                          f'fill="{fill}" stroke="{color}" stroke-width="1"/>')

    def label(self, x: float, y: float, text: str, color: str = "#333333"):
        px, py = self._px(x, y)
        self._body.append(f'<text x="{_fmt(px)}" y="{_fmt(py)}" font-size="11" '
                          f'font-family="sans-serif" fill="{color}">{text}</text>')

    # -- output ----------------------------------------------------------

    def render(self) -> str:
        s = self.size
        head = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" '
                f'viewBox="0 0 {s} {s}">',
                f'<rect width="{s}" height="{s}" fill="white"/>']
        if self.title:
            head.append(f'<text x="{s / 2:.0f}" y="18" text-anchor="middle" '
                        f'font-size="13" font-family="sans-serif" '
                        f'fill="#111111">{self.title}</text>')
        return "\n".join(head + self._body + ["</svg>"]) + "\n"

    def write(self, path):
        with open(path, "w") as fh:
            fh.write(self.render())


def bilinear_nullcline_points(row, which: str, lo: float = -1.25, hi: float = 1.25,
                              n: int = 400):
    """Sampled nullcline of a bilinear equation row (a, b, c, d).

    which='u' solves a uv + b u + c v + d = 0 for v(u); 'v' mirrors the
    roles.  Pole-adjacent samples become breaks (non-finite points).
    """
    a, b, c, d = (float(x) for x in row)
    pts = []
    for k in range(n + 1):
        t = lo + (hi - lo) * k / n
        if which == "u":
            den = a * t + c
            val = math.inf if abs(den) < 1e-9 else -(b * t + d) / den
            pts.append((t, val if abs(val) < 10.0 else math.inf))
        else:
            den = a * t + b
            val = math.inf if abs(den) < 1e-9 else -(c * t + d) / den
            pts.append((val if abs(val) < 10.0 else math.inf, t))
    return pts


def phase_portrait_svg(trajectories, coeffs=None, chain=None, fixed_points=(),
                       events=(), box: bool = True, title: str = "",
                       xlim=(-1.3, 1.3), ylim=(-1.3, 1.3)) -> str:
    """Assemble the standard figure: box edges, nullclines (dotted),
    certificate chain (dashed), trajectories (solid), markers for fixed
    points and events.
    """
    if not trajectories or all(len(t) == 0 for t in trajectories):
        raise ValueError("no trajectory data to plot")
    plot = PhasePlot(xlim=xlim, ylim=ylim, title=title)
    if box:
        plot.box()
    if coeffs is not None:
        plot.nullcline(bilinear_nullcline_points(coeffs.row1(), "u"))
        plot.nullcline(bilinear_nullcline_points(coeffs.row2(), "u"))
    if chain is not None:
        plot.segments([(float(u), float(v)) for u, v in chain.points])
    palette = ("#1f5fb4", "#12823b", "#b01f6e", "#b4720f")
    for i, pts in enumerate(trajectories):
        plot.trajectory(pts, palette[i % len(palette)])
    for (x, y) in fixed_points:
        plot.marker(float(x), float(y), "#111111")
    for (x, y) in events:
        plot.marker(float(x), float(y), "#cc2222", r=2.2, hollow=True)
    return plot.render()
