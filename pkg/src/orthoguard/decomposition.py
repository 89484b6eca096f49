"""Vertical cuts, columns, the column tree, teeth and the tooth graph."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property

from .geometry import AxisRect, LatticePoint, OrthoUnitPolygon, reflex_vertices


class DecompositionBug(RuntimeError):
    pass


class NotATree(DecompositionBug):
    pass


class InvariantViolation(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class VerticalCut:
    x: int
    ylo: int
    yhi: int

    @property
    def lower_end(self) -> LatticePoint:
        return (self.x, self.ylo)

    @property
    def upper_end(self) -> LatticePoint:
        return (self.x, self.yhi)


@dataclass(frozen=True, order=True)
class HorizontalCut:
    y: int
    xlo: int
    xhi: int

    @property
    def ends(self) -> tuple[LatticePoint, LatticePoint]:
        return (self.xlo, self.y), (self.xhi, self.y)

    def other_end(self, p: LatticePoint) -> LatticePoint:
        a, b = self.ends
        return b if p == a else a


@dataclass(frozen=True)
class Column:
    index: int
    xlo: int
    ylo: int
    yhi: int
    left_cuts: tuple[VerticalCut, ...] = ()
    right_cuts: tuple[VerticalCut, ...] = ()

    @property
    def xhi(self) -> int:
        return self.xlo + 1

    @property
    def key(self) -> tuple[int, int]:
        return (self.xlo, self.ylo)

    @property
    def height(self) -> int:
        return self.yhi - self.ylo

    @property
    def rect(self) -> AxisRect:
        return AxisRect(self.xlo, self.xlo + 1, self.ylo, self.yhi)

    @property
    def name(self) -> str:
        return f"c{self.index}"


@dataclass
class ColumnTree:
    nodes: list[Column]
    edges: list[tuple[int, int, VerticalCut]]

    @cached_property
    def adj(self) -> dict[int, list[int]]:
        adj = {c.index: [] for c in self.nodes}
        for a, b, _ in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for v in adj.values():
            v.sort()
        return adj

    @cached_property
    def cut_of(self) -> dict[frozenset, VerticalCut]:
        return {frozenset((a, b)): cut for a, b, cut in self.edges}

    @cached_property
    def edge_of_cut(self) -> dict[VerticalCut, tuple[int, int]]:
        return {cut: (a, b) for a, b, cut in self.edges}

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @cached_property
    def leaves(self) -> list[int]:
        return [v for v in sorted(self.adj) if len(self.adj[v]) == 1]

    def is_leaf(self, v: int) -> bool:
        return len(self.adj[v]) == 1

    def is_interior_edge(self, e) -> bool:
        a, b = tuple(e)
        return not self.is_leaf(a) and not self.is_leaf(b)

    def distances(self, src: int) -> dict[int, int]:
        dist = {src: 0}
        todo = deque([src])
        while todo:
            v = todo.popleft()
            for w in self.adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    todo.append(w)
        return dist

    def parents(self, root: int) -> dict[int, int | None]:
        par: dict[int, int | None] = {root: None}
        todo = deque([root])
        while todo:
            v = todo.popleft()
            for w in self.adj[v]:
                if w not in par:
                    par[w] = v
                    todo.append(w)
        return par

    def path(self, a: int, b: int) -> list[int]:
        par = self.parents(a)
        out = [b]
        while out[-1] != a:
            out.append(par[out[-1]])
        return out[::-1]


@dataclass(frozen=True)
class Tooth:
    column: int
    facing: str  # direction the tooth protrudes: "left" or "right"
    cut: VerticalCut
    rect: AxisRect

    @property
    def top_edge(self) -> tuple[LatticePoint, LatticePoint]:
        return (self.rect.xlo, self.rect.yhi), (self.rect.xhi, self.rect.yhi)

    @property
    def bottom_edge(self) -> tuple[LatticePoint, LatticePoint]:
        return (self.rect.xlo, self.rect.ylo), (self.rect.xhi, self.rect.ylo)

    @property
    def top_corner(self) -> LatticePoint:
        """Reflex end of the top edge (the end on the cut)."""
        return (self.cut.x, self.rect.yhi)

    @property
    def bottom_corner(self) -> LatticePoint:
        return (self.cut.x, self.rect.ylo)


@dataclass
class ToothGraph:
    nodes: list[int]  # tooth column indices
    edges: dict[frozenset, tuple[HorizontalCut, ...]]

    @cached_property
    def adj(self) -> dict[int, list[int]]:
        adj = {t: [] for t in self.nodes}
        for e in self.edges:
            a, b = sorted(e)
            adj[a].append(b)
            adj[b].append(a)
        for v in adj.values():
            v.sort()
        return adj

    def components(self, exclude=()) -> list[list[int]]:
        """Connected components as vertex lists in path order.

        Each list starts at its lowest-indexed endpoint.
        """
        exclude = set(exclude)
        seen = set()
        comps = []
        for t in self.nodes:
            if t in seen or t in exclude:
                continue
            stack, comp = [t], []
            seen.add(t)
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.adj[v]:
                    if w not in seen and w not in exclude:
                        seen.add(w)
                        stack.append(w)
            comps.append(self._path_order(comp, exclude))
        return comps

    def _path_order(self, comp: list[int], exclude: set) -> list[int]:
        if len(comp) == 1:
            return comp
        def nbrs(v):
            return [w for w in self.adj[v] if w not in exclude]
        ends = sorted(v for v in comp if len(nbrs(v)) == 1)
        if len(ends) != 2:
            raise InvariantViolation(f"tooth graph component {sorted(comp)} is not a path")
        order, prev = [ends[0]], None
        while len(order) < len(comp):
            nxt = [w for w in nbrs(order[-1]) if w != prev]
            prev = order[-1]
            order.append(nxt[0])
        return order


@dataclass
class Decomposition:
    polygon: OrthoUnitPolygon
    reflex: list[LatticePoint]
    cuts: list[VerticalCut]
    columns: list[Column]
    tree: ColumnTree
    teeth: dict[int, Tooth]
    hcuts: dict[LatticePoint, HorizontalCut]  # reflex vertex -> its horizontal cut
    vcut_at: dict[LatticePoint, VerticalCut]  # reflex vertex -> its vertical cut
    tooth_graph: ToothGraph
    tooth_cuts: dict[int, tuple[HorizontalCut, HorizontalCut]] = field(default_factory=dict)


def _vertex_neighbors(P: OrthoUnitPolygon) -> dict[LatticePoint, tuple[LatticePoint, LatticePoint]]:
    vs = P.vertices
    n = len(vs)
    return {vs[i]: (vs[i - 1], vs[(i + 1) % n]) for i in range(n)}


def _extend(P: OrthoUnitPolygon, v: LatticePoint, d: LatticePoint) -> LatticePoint:
    """Walk from reflex vertex v in unit direction d until a vertex is hit."""
    cells = P.cells
    x, y = v
    dx, dy = d
    while True:
        # the unit step must be interior: both cells flanking it in P
        if dx:
            cx = x if dx > 0 else x - 1
            flank = ((cx, y - 1), (cx, y))
        else:
            cy = y if dy > 0 else y - 1
            flank = ((x - 1, cy), (x, cy))
        if not all(c in cells for c in flank):
            raise DecompositionBug(f"cut from {v} leaves the interior at {(x, y)}")
        x, y = x + dx, y + dy
        if (x, y) in P.vertex_set:
            return (x, y)


def _inward(P, nbrs, v, vertical: bool) -> LatticePoint:
    for u in nbrs[v]:
        if (u[0] == v[0]) == vertical:
            return (v[0] - u[0], v[1] - u[1])
    raise DecompositionBug(f"no {'vertical' if vertical else 'horizontal'} edge at {v}")


def compute_vertical_cuts(P: OrthoUnitPolygon) -> list[VerticalCut]:
    nbrs = _vertex_neighbors(P)
    cuts = set()
    for v in reflex_vertices(P):
        w = _extend(P, v, _inward(P, nbrs, v, vertical=True))
        if w not in P.reflex_set:
            raise DecompositionBug(f"vertical cut from {v} ends at non-reflex {w}")
        cuts.add(VerticalCut(v[0], min(v[1], w[1]), max(v[1], w[1])))
    cuts = sorted(cuts)
    if len(cuts) != P.n // 4 - 1:
        raise DecompositionBug(f"{len(cuts)} vertical cuts, expected {P.n // 4 - 1}")
    return cuts


def horizontal_cut_from(P: OrthoUnitPolygon, v: LatticePoint) -> HorizontalCut:
    """Inward extension of the horizontal edge at reflex vertex ``v``."""
    w = _extend(P, v, _inward(P, _vertex_neighbors(P), v, vertical=False))
    return HorizontalCut(v[1], min(v[0], w[0]), max(v[0], w[0]))


def compute_columns(P: OrthoUnitPolygon, cuts: list[VerticalCut]) -> list[Column]:
    strips: dict[int, list[int]] = defaultdict(list)
    for i, j in P.cells:
        strips[i].append(j)
    runs = []
    for x, ys in strips.items():
        ys.sort()
        start = prev = ys[0]
        for y in ys[1:] + [None]:
            if y is None or y != prev + 1:
                runs.append((x, start, prev + 1))
                start = y
            prev = y if y is not None else prev
    runs.sort()
    by_x = defaultdict(list)
    for cut in cuts:
        by_x[cut.x].append(cut)

    def touching(x, ylo, yhi):
        return tuple(c for c in by_x.get(x, ()) if c.ylo < yhi and c.yhi > ylo)

    cols = [Column(i, x, lo, hi, touching(x, lo, hi), touching(x + 1, lo, hi))
            for i, (x, lo, hi) in enumerate(runs)]
    if len(cols) != P.n // 4:
        raise DecompositionBug(f"{len(cols)} columns, expected {P.n // 4}")
    return cols


def build_column_tree(columns: list[Column], cuts: list[VerticalCut]) -> ColumnTree:
    def owner(x, cut):
        found = [c.index for c in columns
                 if c.xlo == x and c.ylo <= cut.ylo and cut.yhi <= c.yhi]
        if len(found) != 1:
            raise NotATree(f"cut {cut} has {len(found)} columns at x={x}")
        return found[0]

    edges = []
    for cut in cuts:
        a, b = owner(cut.x - 1, cut), owner(cut.x, cut)
        edges.append((min(a, b), max(a, b), cut))
    tree = ColumnTree(list(columns), edges)
    if len(edges) != len(columns) - 1 or len(tree.distances(0)) != len(columns):
        raise NotATree("column graph is not a spanning tree")
    return tree


def find_teeth(tree: ColumnTree) -> dict[int, Tooth]:
    teeth = {}
    for v in tree.leaves:
        col = tree.nodes[v]
        if col.height != 1:
            raise InvariantViolation(f"leaf column {col.name} has height {col.height}")
        (cut,) = col.left_cuts + col.right_cuts
        facing = "right" if cut.x == col.xlo else "left"
        teeth[v] = Tooth(v, facing, cut, col.rect)
    return teeth


def build_tooth_graph(P: OrthoUnitPolygon, teeth: dict[int, Tooth],
                      hcuts: dict[LatticePoint, HorizontalCut]):
    owners: dict[HorizontalCut, list[int]] = defaultdict(list)
    tooth_cuts = {}
    for t, tooth in teeth.items():
        bottom, top = hcuts[tooth.bottom_corner], hcuts[tooth.top_corner]
        tooth_cuts[t] = (bottom, top)
        owners[bottom].append(t)
        owners[top].append(t)
    edges: dict[frozenset, tuple] = {}
    for cut, ts in owners.items():
        if len(ts) == 2 and ts[0] != ts[1]:
            e = frozenset(ts)
            edges[e] = tuple(sorted(edges.get(e, ()) + (cut,)))
    H = ToothGraph(sorted(teeth), edges)
    for t, nb in H.adj.items():
        if len(nb) > 2:
            raise InvariantViolation(f"tooth c{t} has degree {len(nb)}")
    if len(edges) > len(H.nodes) - len(H.components()):
        raise InvariantViolation("tooth graph has a cycle")
    return H, tooth_cuts


def decompose(P: OrthoUnitPolygon) -> Decomposition:
    reflex = reflex_vertices(P)
    cuts = compute_vertical_cuts(P)
    columns = compute_columns(P, cuts)
    tree = build_column_tree(columns, cuts)
    vcut_at = {}
    for cut in cuts:
        vcut_at[cut.lower_end] = cut
        vcut_at[cut.upper_end] = cut
    hcuts = {v: horizontal_cut_from(P, v) for v in reflex}
    teeth = find_teeth(tree) if len(columns) > 1 else {}
    H, tooth_cuts = build_tooth_graph(P, teeth, hcuts)
    return Decomposition(P, reflex, cuts, columns, tree, teeth, hcuts, vcut_at, H, tooth_cuts)


def dump(D: Decomposition) -> str:
    lines = []
    for c in D.columns:
        kind = "leaf" if D.tree.degree(c.index) == 1 else "internal"
        lines.append(f"COL {c.xlo} {c.ylo} {c.yhi} {c.height} {kind}")
    for cut in D.cuts:
        lines.append(f"VCUT {cut.x} {cut.ylo} {cut.yhi}")
    for e, hc in sorted(D.tooth_graph.edges.items(), key=lambda kv: sorted(kv[0])):
        a, b = sorted(e)
        for cut in hc:
            lines.append(f"HEDGE c{a} c{b} {cut.y}")
    return "\n".join(lines) + "\n"
