"""Exact lattice geometry for ortho-unit polygons.

Polygons have integer vertices; everything derived from them (guards,
visibility vertices, query points) is an exact rational ``mpq``.  There is
no floating point anywhere in this module.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from gmpy2 import mpq

LatticePoint = tuple[int, int]
Point = tuple  # (mpq, mpq); ints are accepted wherever a Point is read

Q = mpq
HALF = mpq(1, 2)


class ValidationError(ValueError):
    """Raised when a vertex list is not an ortho-unit polygon."""

    kind = "ValidationError"

    def __init__(self, message: str = ""):
        super().__init__(f"{self.kind}: {message}" if message else self.kind)


class TooFew(ValidationError):
    kind = "TooFew"


class NotClosedOrthogonal(ValidationError):
    kind = "NotClosedOrthogonal"


class NonUnitEdge(ValidationError):
    kind = "NonUnitEdge"


class NotAlternating(ValidationError):
    kind = "NotAlternating"


class NotSimple(ValidationError):
    kind = "NotSimple"


class EndpointOutside(ValueError):
    pass


class Location(enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class AxisRect:
    xlo: int
    xhi: int
    ylo: int
    yhi: int

    def __post_init__(self):
        if not (self.xlo < self.xhi and self.ylo < self.yhi):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def corners(self) -> tuple[LatticePoint, ...]:
        return ((self.xlo, self.ylo), (self.xhi, self.ylo),
                (self.xhi, self.yhi), (self.xlo, self.yhi))

    @property
    def area(self) -> int:
        return (self.xhi - self.xlo) * (self.yhi - self.ylo)

    def contains(self, p: Point) -> bool:
        return self.xlo <= p[0] <= self.xhi and self.ylo <= p[1] <= self.yhi

    def center(self) -> Point:
        return (mpq(self.xlo + self.xhi, 2), mpq(self.ylo + self.yhi, 2))


def floor_q(v) -> int:
    if isinstance(v, int):
        return v
    return int(v.numerator // v.denominator)


def is_integral(v) -> bool:
    return isinstance(v, int) or v.denominator == 1


def cross(o: Point, a: Point, b: Point):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _cells_from_boundary(vertices: Sequence[LatticePoint]) -> frozenset:
    # Row-wise crossing parity over the vertical unit edges.
    rows: dict[int, list[int]] = {}
    n = len(vertices)
    for i in range(n):
        (x0, y0), (x1, y1) = vertices[i], vertices[(i + 1) % n]
        if x0 == x1:
            rows.setdefault(min(y0, y1), []).append(x0)
    cells = set()
    for j, xs in rows.items():
        xs.sort()
        for a, b in zip(xs[0::2], xs[1::2]):
            cells.update((i, j) for i in range(a, b))
    return frozenset(cells)


@dataclass(frozen=True)
class OrthoUnitPolygon:
    """A validated, counterclockwise ortho-unit polygon.

    Build instances with :func:`validate_polygon`; the constructor itself
    does not check anything.
    """

    vertices: tuple[LatticePoint, ...]

    @property
    def n(self) -> int:
        return len(self.vertices)

    def edges(self) -> Iterable[tuple[LatticePoint, LatticePoint]]:
        vs = self.vertices
        for i in range(len(vs)):
            yield vs[i], vs[(i + 1) % len(vs)]

    @cached_property
    def cells(self) -> frozenset:
        """Lower-left corners of the unit cells that tile the polygon."""
        return _cells_from_boundary(self.vertices)

    @cached_property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    @cached_property
    def reflex_set(self) -> frozenset:
        return frozenset(reflex_vertices(self))

    @cached_property
    def bbox(self) -> tuple[int, int, int, int]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), max(xs), min(ys), max(ys)

    @cached_property
    def lattice_points(self) -> tuple[LatticePoint, ...]:
        pts = set()
        for i, j in self.cells:
            pts.update(((i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)))
        return tuple(sorted(pts))

    def __repr__(self) -> str:
        return f"OrthoUnitPolygon(n={self.n}, vertices={self.vertices[:4]}...)"


def signed_area2(vertices: Sequence[Point]):
    """Twice the signed shoelace area."""
    s = 0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return s


def validate_polygon(raw_vertices: Sequence[Sequence[int]]) -> OrthoUnitPolygon:
    """Check the ortho-unit conditions and normalize to counterclockwise.

    Checks run per edge in the order: axis-parallel, unit length, turning;
    then simplicity.  A clockwise input is reversed (keeping its first
    vertex first).
    """
    if len(raw_vertices) < 4:
        raise TooFew(f"{len(raw_vertices)} vertices")
    vs = []
    for p in raw_vertices:
        x, y = p
        if int(x) != x or int(y) != y:
            raise NotClosedOrthogonal(f"non-integer vertex {p!r}")
        vs.append((int(x), int(y)))
    n = len(vs)
    horizontal = []
    for i in range(n):
        (x0, y0), (x1, y1) = vs[i], vs[(i + 1) % n]
        dx, dy = x1 - x0, y1 - y0
        if dx and dy:
            raise NotClosedOrthogonal(f"edge {vs[i]}->{vs[(i + 1) % n]}")
        if abs(dx) + abs(dy) != 1:
            raise NonUnitEdge(f"edge {vs[i]}->{vs[(i + 1) % n]} has length {abs(dx) + abs(dy)}")
        horizontal.append(dy == 0)
    for i in range(n):
        if horizontal[i] == horizontal[(i + 1) % n]:
            raise NotAlternating(f"edges at vertex {vs[(i + 1) % n]} are collinear")
    # Unit lattice edges can only meet at lattice endpoints, so simplicity
    # reduces to distinct vertices.
    if len(set(vs)) != n:
        seen = set()
        dup = next(v for v in vs if v in seen or seen.add(v))
        raise NotSimple(f"vertex {dup} repeated")
    if n % 4:
        raise NotSimple(f"n={n} is not a multiple of 4")
    a2 = signed_area2(vs)
    if a2 < 0:
        vs = [vs[0]] + vs[:0:-1]
        a2 = -a2
    poly = OrthoUnitPolygon(tuple(vs))
    # Pick's identity with every boundary lattice point a vertex.
    interior = sum(1 for p in poly.lattice_points if _all_four(poly.cells, p))
    if a2 != 2 * interior + n - 2 or len(poly.cells) * 2 != a2:
        raise NotSimple("Pick's identity fails")
    return poly


def _all_four(cells, p: LatticePoint) -> bool:
    x, y = p
    return ((x - 1, y - 1) in cells and (x, y - 1) in cells
            and (x - 1, y) in cells and (x, y) in cells)


def reflex_vertices(P: OrthoUnitPolygon) -> list[LatticePoint]:
    vs = P.vertices
    n = len(vs)
    return [vs[i] for i in range(n) if cross(vs[i - 1], vs[i], vs[(i + 1) % n]) < 0]


def area(P: OrthoUnitPolygon) -> int:
    return signed_area2(P.vertices) // 2


def _candidate_cells(v) -> tuple[int, ...]:
    f = floor_q(v)
    return (f - 1, f) if is_integral(v) else (f,)


def point_location(P: OrthoUnitPolygon, p: Point) -> Location:
    """Classify ``p`` against the closed polygon.

    A point is in P iff some closed unit cell of P contains it; it is on the
    boundary iff additionally some closed cell around it is not in P.
    """
    cells = P.cells
    hits = total = 0
    for i in _candidate_cells(p[0]):
        for j in _candidate_cells(p[1]):
            total += 1
            if (i, j) in cells:
                hits += 1
    if not hits:
        return Location.OUTSIDE
    return Location.INSIDE if hits == total else Location.BOUNDARY


def in_polygon(P: OrthoUnitPolygon, p: Point) -> bool:
    cells = P.cells
    for i in _candidate_cells(p[0]):
        for j in _candidate_cells(p[1]):
            if (i, j) in cells:
                return True
    return False


def _next_break(o, d, t):
    """Smallest parameter > t at which o + s*d crosses an integer line."""
    if d == 0:
        return None
    v = o + t * d
    f = floor_q(v)
    k = f + 1 if d > 0 else (f - 1 if is_integral(v) else f)
    return (k - o) / d


def reach(P: OrthoUnitPolygon, origin: Point, direction: Point, t_max=None):
    """Largest t (capped at ``t_max``) with segment [o, o + t*d] inside P.

    The segment is split where it crosses integer grid lines; each open
    piece lies inside one open cell or one open unit edge, so it is in P
    iff its midpoint is.  Closedness of P takes care of the break points.
    ``origin`` must be in P.
    """
    ox, oy = mpq(origin[0]), mpq(origin[1])
    dx, dy = mpq(direction[0]), mpq(direction[1])
    if dx == 0 and dy == 0:
        return t_max if t_max is not None else mpq(0)
    xmin, xmax, ymin, ymax = P.bbox
    t = mpq(0)
    while True:
        tx = _next_break(ox, dx, t)
        ty = _next_break(oy, dy, t)
        nxt = tx if ty is None else ty if tx is None else min(tx, ty)
        if t_max is not None and nxt > t_max:
            nxt = t_max
        mid = (t + nxt) / 2
        mx, my = ox + mid * dx, oy + mid * dy
        if not (xmin <= mx <= xmax and ymin <= my <= ymax) or not in_polygon(P, (mx, my)):
            return t
        t = nxt
        if t_max is not None and t == t_max:
            return t


def segment_in_polygon(P: OrthoUnitPolygon, a: Point, b: Point) -> bool:
    """True iff the closed segment ab lies in the closed polygon."""
    if not in_polygon(P, a) or not in_polygon(P, b):
        raise EndpointOutside(f"segment endpoint outside polygon: {a}, {b}")
    if a[0] == b[0] and a[1] == b[1]:
        return True
    d = (b[0] - a[0], b[1] - a[1])
    return reach(P, a, d, mpq(1)) == 1


def rotate90(P: OrthoUnitPolygon) -> OrthoUnitPolygon:
    """Rotate counterclockwise by 90 degrees, then shift to min coords 0."""
    rot = [(-y, x) for x, y in P.vertices]
    mx = min(p[0] for p in rot)
    my = min(p[1] for p in rot)
    return validate_polygon([(x - mx, y - my) for x, y in rot])


def translate(P: OrthoUnitPolygon, dx: int, dy: int) -> OrthoUnitPolygon:
    return OrthoUnitPolygon(tuple((x + dx, y + dy) for x, y in P.vertices))


def normalized_vertices(P: OrthoUnitPolygon) -> tuple[LatticePoint, ...]:
    """Vertices shifted to min coords 0 and rotated to start at the
    lexicographically smallest vertex; equal for congruent-by-translation
    polygons."""
    mx, _, my, _ = P.bbox
    vs = [(x - mx, y - my) for x, y in P.vertices]
    k = vs.index(min(vs))
    return tuple(vs[k:] + vs[:k])
