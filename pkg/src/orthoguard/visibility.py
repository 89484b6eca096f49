"""Exact visibility regions and coverage deciders.

Visibility is closed: a guard sees q when the closed segment lies in the
closed polygon, so sight lines may graze reflex corners and run along
edges.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property

from gmpy2 import mpq

from .geometry import (AxisRect, OrthoUnitPolygon, Point, area, cross, floor_q,
                       in_polygon, is_integral, reach, signed_area2)


class GuardOutside(ValueError):
    pass


FIXED_DIRECTIONS = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]


def pseudo_angle(d):
    """Rational, strictly monotone stand-in for atan2 on [0, 4)."""
    dx, dy = d
    if dy >= 0:
        if dx > 0 or (dx == 0 and dy == 0):
            return mpq(dy) / (dx + dy)
        return 1 + mpq(-dx) / (-dx + dy)
    if dx < 0:
        return 2 + mpq(-dy) / (-dx - dy)
    return 3 + mpq(dx) / (dx - dy)


def _l1(d):
    return abs(d[0]) + abs(d[1])


def _ray_line_param(g, d, line):
    """Parameter s with g + s*d on the axis line ('x', c) or ('y', c)."""
    axis, c = line
    if axis == "x":
        return (c - g[0]) / mpq(d[0])
    return (c - g[1]) / mpq(d[1])


@dataclass
class VisPolygon:
    apex: Point
    vertices: list  # ccw ring; the apex appears when it lies on the boundary
    directions: list = field(repr=False, default_factory=list)
    angles: list = field(repr=False, default_factory=list)
    sectors: list = field(repr=False, default_factory=list)  # line or None per gap
    polygon: OrthoUnitPolygon | None = field(repr=False, default=None)

    @cached_property
    def area(self):
        return signed_area2(self.vertices) / 2

    @cached_property
    def bbox(self):
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return min(xs), max(xs), min(ys), max(ys)

    @cached_property
    def spikes(self) -> list:
        """Zero-area slivers: event rays that see past both adjacent sectors."""
        out = []
        g = self.apex
        for i, d in enumerate(self.directions):
            r = reach(self.polygon, g, d)
            lim = mpq(0)
            for line in (self.sectors[i - 1], self.sectors[i]):
                if line is not None:
                    lim = max(lim, _ray_line_param(g, d, line))
            if r > lim:
                out.append(((g[0] + lim * d[0], g[1] + lim * d[1]),
                            (g[0] + r * d[0], g[1] + r * d[1])))
        return out

    def sees(self, q: Point) -> bool:
        """Exact membership using the sector structure."""
        g = self.apex
        w = (q[0] - g[0], q[1] - g[1])
        if w[0] == 0 and w[1] == 0:
            return True
        a = pseudo_angle(w)
        i = bisect_left(self.angles, a)
        m = len(self.angles)
        if i < m and self.angles[i] == a:
            d = self.directions[i]
            s = w[0] / mpq(d[0]) if d[0] else w[1] / mpq(d[1])
            return s <= reach(self.polygon, g, d, s)
        line = self.sectors[(i - 1) % m]
        if line is None:
            return False
        return _ray_line_param(g, w, line) >= 1

    def contains(self, q: Point) -> bool:
        """Closed membership in the ring, or on a spike."""
        if point_in_ring(self.vertices, q) >= 0:
            return True
        return any(on_segment(a, b, q) for a, b in self.spikes)


def visibility_polygon(P: OrthoUnitPolygon, g: Point) -> VisPolygon:
    """Exact visibility region of ``g`` by rotational ray casting.

    Event directions point at every polygon vertex plus eight fixed
    directions (so consecutive events are < 90 degrees apart).  No vertex
    lies strictly inside a gap between events, so within a gap the far end
    of the sight line slides along one edge; one probe ray per gap finds
    that edge's supporting line.
    """
    g = (mpq(g[0]), mpq(g[1]))
    if not in_polygon(P, g):
        raise GuardOutside(f"guard {g} is outside the polygon")
    dirs = {}
    for v in P.vertices:
        d = (v[0] - g[0], v[1] - g[1])
        if d[0] == 0 and d[1] == 0:
            continue
        dirs.setdefault(pseudo_angle(d), d)
    for d in FIXED_DIRECTIONS:
        dirs.setdefault(pseudo_angle(d), (mpq(d[0]), mpq(d[1])))
    angles = sorted(dirs)
    directions = [dirs[a] for a in angles]
    m = len(directions)
    sectors = []
    ring = []
    for i in range(m):
        d0, d1 = directions[i], directions[(i + 1) % m]
        n0, n1 = _l1(d0), _l1(d1)
        u = (d0[0] / n0 + d1[0] / n1, d0[1] / n0 + d1[1] / n1)
        t = reach(P, g, u)
        if t == 0:
            sectors.append(None)
            ring.append(g)
            continue
        hx, hy = g[0] + t * u[0], g[1] + t * u[1]
        if is_integral(hx) and not is_integral(hy):
            line = ("x", hx)
        elif is_integral(hy) and not is_integral(hx):
            line = ("y", hy)
        else:
            raise AssertionError(f"probe from {g} exits at lattice point {(hx, hy)}")
        sectors.append(line)
        for d in (d0, d1):
            s = _ray_line_param(g, d, line)
            ring.append((g[0] + s * d[0], g[1] + s * d[1]))
    return VisPolygon(g, _clean_ring(ring), directions, angles, sectors, P)


def _clean_ring(ring: list) -> list:
    pts = []
    for p in ring:
        if not pts or pts[-1] != p:
            pts.append(p)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) > 3:
        changed = False
        out = []
        n = len(pts)
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            if cross(a, b, c) == 0 and _between(a, b, c):
                changed = True
                continue
            out.append(b)
        if changed:
            # remove one pass worth, keep the ring consistent
            pts = out
    return pts


def _between(a, b, c) -> bool:
    return (min(a[0], c[0]) <= b[0] <= max(a[0], c[0])
            and min(a[1], c[1]) <= b[1] <= max(a[1], c[1]))


def on_segment(a, b, q) -> bool:
    return cross(a, b, q) == 0 and _between(a, q, b)


def segments_touch(a, b, c, d) -> bool:
    """Closed segments ab and cd share a point."""
    d1, d2 = cross(a, b, c), cross(a, b, d)
    d3, d4 = cross(c, d, a), cross(c, d, b)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    return (on_segment(a, b, c) or on_segment(a, b, d) or on_segment(c, d, a) or on_segment(c, d, b))


def crossing_point(a, b, c, d):
    """The single common point of closed segments ab, cd, or None when they
    are disjoint or overlap collinearly (overlap ends are endpoints)."""
    r = (b[0] - a[0], b[1] - a[1])
    s = (d[0] - c[0], d[1] - c[1])
    den = r[0] * s[1] - r[1] * s[0]
    if den == 0:
        return None
    qa = (c[0] - a[0], c[1] - a[1])
    t = mpq(qa[0] * s[1] - qa[1] * s[0]) / den
    u = mpq(qa[0] * r[1] - qa[1] * r[0]) / den
    if 0 <= t <= 1 and 0 <= u <= 1:
        return (a[0] + t * r[0], a[1] + t * r[1])
    return None


def point_in_ring(ring, q) -> int:
    """+1 strictly inside, 0 on the boundary, -1 outside."""
    inside = False
    n = len(ring)
    qx, qy = q
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        ay, by = a[1], b[1]
        # edges whose y-range misses q can neither hold nor cross it
        if (qy < ay and qy < by) or (qy > ay and qy > by):
            continue
        if min(a[0], b[0]) <= qx <= max(a[0], b[0]) and cross(a, b, q) == 0:
            return 0
        if (ay > qy) != (by > qy):
            # crossing strictly right of q, without dividing
            c = (qy - ay) * (b[0] - a[0]) - (qx - a[0]) * (by - ay)
            if (c > 0) == (by > ay):
                inside = not inside
    return 1 if inside else -1


# -- rectangle visibility ---------------------------------------------------

def convex_hull(points) -> list:
    pts = sorted(set((mpq(x), mpq(y)) for x, y in points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _interiors_meet(A: list, B: list) -> bool:
    """Open interiors of two convex polygons (ccw) intersect."""
    for poly in (A, B):
        n = len(poly)
        for i in range(n):
            a, b = poly[i], poly[(i + 1) % n]
            nx, ny = b[1] - a[1], a[0] - b[0]
            pa = [nx * p[0] + ny * p[1] for p in A]
            pb = [nx * p[0] + ny * p[1] for p in B]
            if max(pa) <= min(pb) or max(pb) <= min(pa):
                return False
    return True


def rect_fully_visible(P: OrthoUnitPolygon, g: Point, rect: AxisRect) -> bool:
    """True iff every point of the closed rectangle is seen from ``g``.

    For convex R, R is seen from g exactly when conv({g} + R) lies in P, and
    a convex body with interior lies in the closed polygon iff every unit
    cell meeting its interior is a cell of P.
    """
    if not in_polygon(P, g):
        raise GuardOutside(f"guard {g} is outside the polygon")
    if rect.contains(g):
        return all((i, j) in P.cells for i in range(rect.xlo, rect.xhi)
                   for j in range(rect.ylo, rect.yhi))
    hull = convex_hull(list(rect.corners) + [g])
    xs = [p[0] for p in hull]
    ys = [p[1] for p in hull]
    cells = P.cells
    for i in range(floor_q(min(xs)), -floor_q(-max(xs))):
        for j in range(floor_q(min(ys)), -floor_q(-max(ys))):
            if (i, j) in cells:
                continue
            sq = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
            if _interiors_meet(hull, sq):
                return False
    return True


# -- coverage ---------------------------------------------------------------

@dataclass
class CoverageReport:
    covered: bool
    covered_area: object
    witnesses: list
    method: str = "union"

    def lines(self) -> list[str]:
        return [f"WITNESS {fmt_q(x)} {fmt_q(y)}" for x, y in self.witnesses]


def fmt_q(v) -> str:
    v = mpq(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _seg_params(a, b, c, d) -> list:
    """Parameters on ab where it meets segment cd (crossings, touches and
    the ends of collinear overlap)."""
    r = (b[0] - a[0], b[1] - a[1])
    s = (d[0] - c[0], d[1] - c[1])
    den = r[0] * s[1] - r[1] * s[0]
    qa = (c[0] - a[0], c[1] - a[1])
    if den == 0:
        if qa[0] * r[1] - qa[1] * r[0] != 0:
            return []
        rr = r[0] * r[0] + r[1] * r[1]
        out = []
        for p in (c, d):
            t = ((p[0] - a[0]) * r[0] + (p[1] - a[1]) * r[1]) / mpq(rr)
            if 0 < t < 1:
                out.append(t)
        return out
    t = mpq(qa[0] * s[1] - qa[1] * s[0]) / den
    u = mpq(qa[0] * r[1] - qa[1] * r[0]) / den
    if 0 <= t <= 1 and 0 <= u <= 1 and 0 < t < 1:
        return [t]
    return []


def _bbox_of(ring):
    xs = [p[0] for p in ring]
    ys = [p[1] for p in ring]
    return min(xs), max(xs), min(ys), max(ys)


def _boxes_meet(a, b) -> bool:
    return a[0] <= b[1] and b[0] <= a[1] and a[2] <= b[3] and b[2] <= a[3]


class _IndexedRing:
    """A ring with its edges bucketed by unit x-strip (for edge pairs) and
    by height band (for point location).  Band 2k is the line y = k and
    band 2k+1 the open strip k < y < k+1."""

    def __init__(self, ring: list):
        self.ring = ring
        self.edges = [(ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]
        self.boxes = [_bbox_of(e) for e in self.edges]
        self.box = _bbox_of(ring)
        self.xstrips: dict[int, list[int]] = {}
        self.bands: dict[int, list[int]] = {}
        for k, (xlo, xhi, ylo, yhi) in enumerate(self.boxes):
            for x in range(floor_q(xlo), floor_q(xhi) + 1):
                self.xstrips.setdefault(x, []).append(k)
            for y in range(-floor_q(-ylo), floor_q(yhi) + 1):
                self.bands.setdefault(2 * y, []).append(k)
            for y in range(floor_q(ylo), -floor_q(-yhi)):
                if ylo < y + 1 and yhi > y:
                    self.bands.setdefault(2 * y + 1, []).append(k)

    def _band(self, qy) -> list[int]:
        f = floor_q(qy)
        return self.bands.get(2 * f if f == qy else 2 * f + 1, [])

    def edges_near(self, box) -> list[int]:
        out = set()
        for x in range(floor_q(box[0]), floor_q(box[1]) + 1):
            out.update(self.xstrips.get(x, ()))
        return [k for k in sorted(out) if _boxes_meet(box, self.boxes[k])]

    def locate(self, q) -> int:
        """Same result as point_in_ring, scanning only the edges that meet
        q's height band."""
        qx, qy = q
        inside = False
        for k in self._band(qy):
            a, b = self.edges[k]
            ay, by = a[1], b[1]
            if (qy < ay and qy < by) or (qy > ay and qy > by):
                continue
            if min(a[0], b[0]) <= qx <= max(a[0], b[0]) and cross(a, b, q) == 0:
                return 0
            if (ay > qy) != (by > qy):
                c = (qy - ay) * (b[0] - a[0]) - (qx - a[0]) * (by - ay)
                if (c > 0) == (by > ay):
                    inside = not inside
        return 1 if inside else -1

    def edge_through(self, q):
        for k in self._band(q[1]):
            c, d = self.edges[k]
            if on_segment(c, d, q):
                return c, d
        return None


def union_area(rings: list) -> object:
    """Exact area of a union of simple ccw polygons.

    Boundary-fragment method: every edge is split at all contacts with the
    other polygons; a fragment contributes to the union boundary iff its
    midpoint is outside every other polygon, with coincident fragments kept
    once when equally oriented and dropped when opposed.
    """
    idx = [_IndexedRing(r) for r in rings]
    total = mpq(0)
    for i, R in enumerate(idx):
        others = [j for j in range(len(idx)) if j != i and _boxes_meet(R.box, idx[j].box)]
        for (a, b), ebox in zip(R.edges, R.boxes):
            near = [j for j in others if _boxes_meet(ebox, idx[j].box)]
            ts = {mpq(0), mpq(1)}
            for j in near:
                S = idx[j]
                for k in S.edges_near(ebox):
                    c, d = S.edges[k]
                    ts.update(_seg_params(a, b, c, d))
            ts = sorted(ts)
            for t0, t1 in zip(ts, ts[1:]):
                p0 = (a[0] + t0 * (b[0] - a[0]), a[1] + t0 * (b[1] - a[1]))
                p1 = (a[0] + t1 * (b[0] - a[0]), a[1] + t1 * (b[1] - a[1]))
                m = ((p0[0] + p1[0]) / 2, (p0[1] + p1[1]) / 2)
                hider = _fragment_hider(i, a, b, m, near, idx)
                if hider is None:
                    total += p0[0] * p1[1] - p1[0] * p0[1]
                elif near[0] != hider:
                    # neighbouring fragments tend to be hidden by the same ring
                    near.remove(hider)
                    near.insert(0, hider)
    return total / 2


def _fragment_hider(i, a, b, m, near, idx) -> int | None:
    """Index of a ring that removes the fragment with midpoint m from the
    union boundary, or None when the fragment is kept."""
    for j in near:
        bx = idx[j].box
        if not (bx[0] <= m[0] <= bx[1] and bx[2] <= m[1] <= bx[3]):
            continue
        loc = idx[j].locate(m)
        if loc > 0:
            return j
        if loc == 0:
            c, d = idx[j].edge_through(m)
            same = (b[0] - a[0]) * (d[0] - c[0]) + (b[1] - a[1]) * (d[1] - c[1]) > 0
            if not same or j < i:
                return j
    return None


def union_covers(P: OrthoUnitPolygon, guards: list, vis: list | None = None) -> CoverageReport:
    """Decide coverage of P by the union of the guards' visibility regions.

    The union is contained in P and closed, and P is the closure of its
    interior, so equal areas mean full coverage.  Witnesses for a gap come
    from the cell-subdivision decider.
    """
    if vis is None:
        vis = [visibility_polygon(P, g) for g in guards]
    if not vis:
        return CoverageReport(False, mpq(0), [P.cells and _cell_center(min(P.cells))], "union")
    covered_area = union_area([v.vertices for v in vis])
    ok = covered_area == area(P)
    witnesses = [] if ok else cell_coverage(P, vis).witnesses
    return CoverageReport(ok, covered_area, witnesses, "union")


def _cell_center(c):
    return (mpq(2 * c[0] + 1, 2), mpq(2 * c[1] + 1, 2))


def _split(poly: list, line) -> tuple[list, list]:
    """Split convex polygon by the line through (p, q); returns (left, right)."""
    p, q = line
    left, right = [], []
    n = len(poly)
    for k in range(n):
        a, b = poly[k], poly[(k + 1) % n]
        ca, cb = cross(p, q, a), cross(p, q, b)
        if ca >= 0:
            left.append(a)
        if ca <= 0:
            right.append(a)
        if (ca > 0 and cb < 0) or (ca < 0 and cb > 0):
            t = ca / (ca - cb)
            x = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
            left.append(x)
            right.append(x)
    return left, right


def _crosses_open_cell(a, b, i, j) -> bool:
    # segment meets open square iff some point strictly inside: clip
    t0, t1 = mpq(0), mpq(1)
    dx, dy = b[0] - a[0], b[1] - a[1]
    for pcoef, qval in ((-dx, a[0] - i), (dx, i + 1 - a[0]), (-dy, a[1] - j), (dy, j + 1 - a[1])):
        if pcoef == 0:
            if qval <= 0:
                return False
            continue
        r = mpq(qval) / pcoef
        if pcoef < 0:
            t0 = max(t0, r)
        else:
            t1 = min(t1, r)
    if t0 >= t1:
        return False
    # strict interior check at the midpoint of the clipped piece
    tm = (t0 + t1) / 2
    x, y = a[0] + tm * dx, a[1] + tm * dy
    return i < x < i + 1 and j < y < j + 1


def cell_coverage(P: OrthoUnitPolygon, vis: list) -> CoverageReport:
    """Independent decider: subdivide each unit cell by every visibility
    edge crossing it and classify each convex face by an interior point."""
    per_cell: dict = {}
    for v in vis:
        ring = v.vertices
        for k in range(len(ring)):
            a, b = ring[k], ring[(k + 1) % len(ring)]
            for i in range(floor_q(min(a[0], b[0])), floor_q(max(a[0], b[0])) + 1):
                for j in range(floor_q(min(a[1], b[1])), floor_q(max(a[1], b[1])) + 1):
                    if (i, j) in P.cells and _crosses_open_cell(a, b, i, j):
                        per_cell.setdefault((i, j), []).append((a, b))
    boxes = [v.bbox for v in vis]
    uncovered = mpq(0)
    witnesses = []
    for c in sorted(P.cells):
        i, j = c
        faces = [[(mpq(i), mpq(j)), (mpq(i + 1), mpq(j)), (mpq(i + 1), mpq(j + 1)), (mpq(i), mpq(j + 1))]]
        for line in per_cell.get(c, ()):
            nxt = []
            for f in faces:
                left, right = _split(f, line)
                for part in (left, right):
                    if len(part) >= 3 and signed_area2(part) != 0:
                        nxt.append(part)
            faces = nxt
        for f in faces:
            cx = sum(p[0] for p in f) / len(f)
            cy = sum(p[1] for p in f) / len(f)
            hit = False
            for v, bb in zip(vis, boxes):
                if bb[0] <= cx <= bb[1] and bb[2] <= cy <= bb[3] and point_in_ring(v.vertices, (cx, cy)) > 0:
                    hit = True
                    break
            if not hit:
                uncovered += signed_area2(f) / 2
                witnesses.append((cx, cy))
    return CoverageReport(not witnesses, area(P) - uncovered, witnesses, "cells")
