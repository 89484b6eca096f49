"""Tree matchings, the tooth-to-interior-edge matching, forests and blame."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq
from scipy.optimize import linear_sum_assignment

from .decomposition import ColumnTree, Decomposition, HorizontalCut, InvariantViolation
from .geometry import Point
from .visibility import rect_fully_visible

Edge = tuple[int, int]


class HallViolation(RuntimeError):
    pass


class OddComponentRemains(RuntimeError):
    pass


class NoAlternatingPath(ValueError):
    pass


def edge_key(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


def fmt_edge(e: Edge) -> str:
    return f"c{e[0]},c{e[1]}"


# -- tree matchings -----------------------------------------------------------

def _adjacency(tree) -> dict[int, list[int]]:
    return tree.adj if isinstance(tree, ColumnTree) else tree


def prop1_matching(tree, x: int) -> set[Edge]:
    """Matching that saturates ``x`` and every vertex with a child when the
    tree is rooted at ``x``; for a leaf ``x`` that is every interior vertex.

    Greedy from the root down: a vertex not matched by its parent takes
    its first child.
    """
    adj = _adjacency(tree)
    matching: set[Edge] = set()
    matched = set()
    stack = [(x, None)]
    while stack:
        v, parent = stack.pop()
        children = sorted(w for w in adj[v] if w != parent)
        if v not in matched and children:
            c = children[0]
            matching.add(edge_key(v, c))
            matched.update((v, c))
        for c in reversed(children):
            stack.append((c, v))
    return matching


def saturated(matching) -> set[int]:
    return {v for e in matching for v in e}


def alternating_paths(adj: dict[int, list[int]], matching: set[Edge], leaf: int,
                      allow_saturated: bool = False):
    """Yield maximal alternating paths from ``leaf``.

    A path ends either on an unsaturated vertex reached by an unmatched
    edge or on a leaf reached by a matched edge, so toggling it keeps every
    interior vertex saturated.
    """
    mate = {}
    for a, b in matching:
        mate[a], mate[b] = b, a
    if leaf in mate and not allow_saturated:
        raise NoAlternatingPath(f"c{leaf} is already saturated")

    def after_unmatched(path):
        v = path[-1]
        if v not in mate:
            yield list(path)
            return
        yield from after_matched(path + [mate[v]])

    def after_matched(path):
        v = path[-1]
        nxt = sorted(w for w in adj[v] if w != path[-2])
        if not nxt:
            yield list(path)
            return
        for w in nxt:
            if w not in path:
                yield from after_unmatched(path + [w])

    if leaf in mate:
        yield from after_matched([leaf, mate[leaf]])
    else:
        for w in sorted(adj[leaf]):
            yield from after_unmatched([leaf, w])


def toggle(matching: set[Edge], path: list[int]) -> set[Edge]:
    out = set(matching)
    for a, b in zip(path, path[1:]):
        out ^= {edge_key(a, b)}
    return out


def alternating_path_swap(adj, matching: set[Edge], leaf: int,
                          allow_saturated: bool = False) -> set[Edge]:
    """Toggle the first maximal alternating path from ``leaf``."""
    adj = _adjacency(adj)
    for path in alternating_paths(adj, matching, leaf, allow_saturated):
        return toggle(matching, path)
    raise NoAlternatingPath(f"no alternating path from c{leaf}")


# -- odd components and the L-matching ------------------------------------------

@dataclass(frozen=True)
class OddComponent:
    teeth: tuple[int, ...]
    top: int  # tooth carrying the top-most horizontal edge
    bottom: int

    @property
    def name(self) -> str:
        return "+".join(f"c{t}" for t in sorted(self.teeth))


@dataclass(frozen=True)
class Candidate:
    edge: Edge
    tooth: int
    corridor: HorizontalCut | None
    position: Point | None = None  # verified guard spot for widened candidates


@dataclass(frozen=True)
class LPair:
    component: OddComponent
    edge: Edge
    tooth: int
    corridor: HorizontalCut | None
    dist: int
    position: Point | None = None


@dataclass
class LMatching:
    pairs: list[LPair] = field(default_factory=list)

    @property
    def edges(self) -> set[Edge]:
        return {p.edge for p in self.pairs}

    @property
    def teeth(self) -> set[int]:
        return {p.tooth for p in self.pairs}

    def dump(self) -> list[str]:
        return [f"LMATCH tooth=c{p.tooth} edge={fmt_edge(p.edge)} dist={p.dist}"
                for p in sorted(self.pairs, key=lambda p: p.tooth)]


def odd_components(D: Decomposition) -> list[OddComponent]:
    out = []
    for comp in D.tooth_graph.components():
        if len(comp) % 2 == 0:
            continue
        top = max(comp, key=lambda t: (D.teeth[t].rect.yhi, -t))
        bottom = min(comp, key=lambda t: (D.teeth[t].rect.ylo, t))
        out.append(OddComponent(tuple(comp), top, bottom))
    return out


def candidate_interior_edges(D: Decomposition, comp: OddComponent) -> list[Candidate]:
    """Interior edges reachable from the component's extreme horizontal cuts."""
    out: list[Candidate] = []
    for tooth, which in ((comp.top, 1), (comp.bottom, 0)):
        t = D.teeth[tooth]
        corner = t.top_corner if which else t.bottom_corner
        cut = D.tooth_cuts[tooth][which]
        r = cut.other_end(corner)
        if r not in D.vcut_at:
            raise InvariantViolation(f"horizontal cut from c{tooth} ends at non-reflex {r}")
        e = edge_key(*D.tree.edge_of_cut[D.vcut_at[r]])
        if e[0] in D.teeth or e[1] in D.teeth:
            raise InvariantViolation(f"cut from c{tooth} reaches a tooth edge {fmt_edge(e)}")
        if not D.tree.is_interior_edge(e):
            raise InvariantViolation(f"edge {fmt_edge(e)} is not interior")
        if all(c.edge != e for c in out):
            out.append(Candidate(e, tooth, cut))
    return out


def _distances(tree: ColumnTree, tooth: int, cache) -> dict[int, int]:
    if cache is None:
        return tree.distances(tooth)
    if tooth not in cache:
        cache[tooth] = tree.distances(tooth)
    return cache[tooth]


def tooth_edge_distance(tree: ColumnTree, tooth: int, e: Edge, dist_cache=None) -> int:
    d = _distances(tree, tooth, dist_cache)
    return min(d[e[0]], d[e[1]])


def guarding_interior_edges(D: Decomposition, comp: OddComponent, dist_cache=None) -> list[Candidate]:
    """The canonical candidates plus every interior edge no farther from an
    end tooth than its canonical edges whose cut has a lattice or
    half-lattice point seeing that whole tooth."""
    canon = candidate_interior_edges(D, comp)
    out = list(canon)
    tree = D.tree
    for tooth in dict.fromkeys((comp.top, comp.bottom)):
        dist = _distances(tree, tooth, dist_cache)
        limit = max(min(dist[c.edge[0]], dist[c.edge[1]]) for c in canon)
        rect = D.teeth[tooth].rect
        for a, b, cut in tree.edges:
            e = edge_key(a, b)
            if min(dist[a], dist[b]) > limit or not tree.is_interior_edge(e):
                continue
            if any(c.edge == e and c.tooth == tooth for c in out):
                continue
            ys = [rect.yhi, rect.ylo] + [mpq(k, 2) for k in range(2 * cut.ylo, 2 * cut.yhi + 1)]
            for y in ys:
                if not cut.ylo <= y <= cut.yhi:
                    continue
                q = (mpq(cut.x), mpq(y))
                if rect_fully_visible(D.polygon, q, rect):
                    out.append(Candidate(e, tooth, None, q))
                    break
    return out


def l_matching(D: Decomposition) -> LMatching:
    """Saturating matching of odd components to interior edges that can
    guard one of their end teeth, minimizing the total tooth-to-edge tree
    distance.

    The canonical candidates alone already admit a saturating matching
    (their bipartite graph has maximum degree two on the edge side); the
    minimum is taken over the widened candidate sets by an exact
    assignment solver.
    """
    comps = odd_components(D)
    if not comps:
        return LMatching()
    dcache: dict = {}
    cands = {c: guarding_interior_edges(D, c, dcache) for c in comps}
    edges = sorted({cand.edge for c in comps for cand in cands[c]})
    col = {e: j for j, e in enumerate(edges)}
    big = 10 ** 6
    cost = np.full((len(comps), len(edges)), big, dtype=np.int64)
    choice = {}
    for i, c in enumerate(comps):
        for cand in cands[c]:
            d = tooth_edge_distance(D.tree, cand.tooth, cand.edge, dcache)
            j = col[cand.edge]
            if d < cost[i, j]:
                cost[i, j] = d
                choice[i, j] = (cand, d)
    rows, cols = linear_sum_assignment(cost)
    pairs = []
    for i, j in zip(rows, cols):
        if cost[i, j] >= big:
            raise HallViolation(f"odd component {comps[i].name} cannot be saturated")
        cand, d = choice[i, j]
        pairs.append(LPair(comps[i], cand.edge, cand.tooth, cand.corridor, d, cand.position))
    pairs.sort(key=lambda p: p.tooth)
    return LMatching(pairs)


# -- forests, root, blame -------------------------------------------------------

@dataclass
class Forests:
    fprime_components: list[frozenset]  # vertex sets, spanned by L-matched edges
    fprime_edges: set[Edge]
    f_vertices: frozenset
    f_adj: dict[int, list[int]]
    matched_teeth: frozenset

    @property
    def fprime_vertices(self) -> frozenset:
        return frozenset().union(*self.fprime_components) if self.fprime_components else frozenset()

    def f_components(self) -> list[list[int]]:
        seen, out = set(), []
        for v in sorted(self.f_vertices):
            if v in seen:
                continue
            comp, stack = [], [v]
            seen.add(v)
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self.f_adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            out.append(sorted(comp))
        return out


def build_forests(D: Decomposition, L: LMatching) -> Forests:
    tree = D.tree
    parent = {}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in L.edges:
        parent.setdefault(a, a)
        parent.setdefault(b, b)
        parent[find(a)] = find(b)
    groups: dict[int, set] = {}
    for v in parent:
        groups.setdefault(find(v), set()).add(v)
    comps = sorted((frozenset(g) for g in groups.values()), key=min)
    removed = set(parent) | L.teeth
    fv = frozenset(v for v in range(len(tree.nodes)) if v not in removed)
    f_adj = {v: sorted(w for w in tree.adj[v] if w in fv) for v in fv}
    return Forests(comps, set(L.edges), fv, f_adj, frozenset(L.teeth))


def select_root(D: Decomposition, L: LMatching) -> int:
    if L.pairs:
        return min(L.teeth)
    return min(D.tree.leaves)


def component_roots(D: Decomposition, forests: Forests, root: int) -> dict[int, int]:
    """Map each F-component's first vertex to its vertex closest to the root."""
    dist = D.tree.distances(root)
    out = {}
    for comp in forests.f_components():
        out[comp[0]] = min(comp, key=lambda v: (dist[v], v))
    return out


@dataclass
class BlameMap:
    by_component: dict[int, int] = field(default_factory=dict)  # F' component id -> blaming vertex

    def blamed_by(self, v: int) -> list[int]:
        return sorted(c for c, l in self.by_component.items() if l == v)

    def dump(self, forests: Forests) -> list[str]:
        lines = []
        for cid, leaf in sorted(self.by_component.items()):
            members = ",".join(f"c{v}" for v in sorted(forests.fprime_components[cid]))
            lines.append(f"BLAME leaf=c{leaf} comp={members}")
        return lines


def compute_blames(D: Decomposition, forests: Forests, root: int) -> BlameMap:
    """Each F' component is blamed by the first vertex outside it on its
    way to the root, when that vertex lies in F."""
    parents = D.tree.parents(root)
    dist = D.tree.distances(root)
    blame = BlameMap()
    for cid, comp in enumerate(forests.fprime_components):
        top = min(comp, key=lambda v: (dist[v], v))
        p = parents[top]
        if p is not None and p in forests.f_vertices:
            blame.by_component[cid] = p
    return blame


def f_matching(forests: Forests, roots: dict[int, int]) -> set[Edge]:
    out: set[Edge] = set()
    for comp in forests.f_components():
        if len(comp) > 1:
            out |= prop1_matching(forests.f_adj, roots[comp[0]])
    return out


# -- T-matching -----------------------------------------------------------------

def t_matching(D: Decomposition, L: LMatching) -> list[tuple[int, int]]:
    """Consecutive pairs along each (necessarily even) path of H minus the
    L-matched teeth."""
    pairs = []
    for comp in D.tooth_graph.components(exclude=L.teeth):
        if len(comp) % 2:
            raise OddComponentRemains(f"tooth path {comp} has odd order")
        pairs.extend((comp[i], comp[i + 1]) for i in range(0, len(comp), 2))
    return pairs


def dump_tmatching(pairs) -> list[str]:
    return [f"TMATCH c{a} c{b}" for a, b in pairs]
