"""Deterministic SVG drawings of polygons, columns, cuts, guards and
visibility regions."""

from __future__ import annotations

from gmpy2 import mpq

from .decomposition import Decomposition
from .geometry import OrthoUnitPolygon

UNIT = 32
MARGIN = 16
PALETTE = ["#e8f1fb", "#fdf1e1", "#e8f6ea", "#f6e8f4", "#fbf8dd", "#e6f4f4"]


def _num(v) -> str:
    v = mpq(v)
    if v.denominator == 1:
        return str(int(v))
    s = f"{float(v):.3f}".rstrip("0").rstrip(".")
    return s


class _Frame:
    def __init__(self, P: OrthoUnitPolygon):
        self.xmin, self.xmax, self.ymin, self.ymax = P.bbox

    def x(self, v) -> str:
        return _num((mpq(v) - self.xmin) * UNIT + MARGIN)

    def y(self, v) -> str:
        return _num((self.ymax - mpq(v)) * UNIT + MARGIN)

    @property
    def size(self) -> tuple[int, int]:
        return ((self.xmax - self.xmin) * UNIT + 2 * MARGIN,
                (self.ymax - self.ymin) * UNIT + 2 * MARGIN)


def render_svg(P: OrthoUnitPolygon, guards=None, decomposition: Decomposition | None = None,
               vis=None) -> str:
    f = _Frame(P)
    w, h = f.size
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
           f'viewBox="0 0 {w} {h}">']
    if decomposition is not None:
        for c in decomposition.columns:
            r = c.rect
            out.append(f'<rect class="column" x="{f.x(r.xlo)}" y="{f.y(r.yhi)}" '
                       f'width="{UNIT}" height="{(r.yhi - r.ylo) * UNIT}" '
                       f'fill="{PALETTE[c.index % len(PALETTE)]}"/>')
    d = " ".join(("M" if i == 0 else "L") + f" {f.x(x)} {f.y(y)}" for i, (x, y) in enumerate(P.vertices))
    out.append(f'<path class="outline" d="{d} Z" fill="none" stroke="#222" stroke-width="2"/>')
    if decomposition is not None:
        for cut in decomposition.cuts:
            out.append(f'<line class="cut" x1="{f.x(cut.x)}" y1="{f.y(cut.ylo)}" x2="{f.x(cut.x)}" '
                       f'y2="{f.y(cut.yhi)}" stroke="#c33" stroke-width="2" stroke-dasharray="3 3"/>')
        for c in decomposition.columns:
            cx, cy = c.rect.center()
            out.append(f'<text class="label" x="{f.x(cx)}" y="{f.y(cy)}" font-size="11" '
                       f'text-anchor="middle" dominant-baseline="middle">{c.name}</text>')
    for V in vis or ():
        pts = " ".join(f"{f.x(x)},{f.y(y)}" for x, y in V.vertices)
        out.append(f'<polygon class="vis" points="{pts}" fill="#f5b700" fill-opacity="0.25" '
                   f'stroke="#c90" stroke-width="1"/>')
    for x, y in guards or ():
        out.append(f'<circle class="guard" cx="{f.x(x)}" cy="{f.y(y)}" r="5" fill="#1565c0"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
