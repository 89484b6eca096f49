"""Brute-force bracket on the minimum number of point guards.

Covering P is the same as fully seeing every unit cell, and a point fully
sees a cell iff it sees the cell's four lattice corners.  ``upper`` is an
exact set cover over a finite candidate set; ``lower`` is a maximum set of
cells no two of which are fully seen by a common candidate.

Two candidate bases are available:

* ``lattice``: lattice points of P plus cell centres.  Both bounds are then
  relative to that restricted guard set.
* ``arrangement``: vertices of P together with all endpoints and crossings of
  the window and spike edges of the visibility regions of lattice points.
  Which corners a point sees changes only across those edges, and the
  regions are closed, so every guard is dominated by one of these
  vertices.  Both bounds then hold for unrestricted point guards.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
from gmpy2 import mpq

from .geometry import Location, OrthoUnitPolygon, Point, point_location, segment_in_polygon
from .visibility import crossing_point, fmt_q, point_in_ring, segments_touch, visibility_polygon

DEFAULT_MAX_CELLS = 64
CERTIFY_MAX_CELLS = 16
ARRANGEMENT_MAX_CELLS = 24


class InstanceTooLarge(ValueError):
    pass


@dataclass
class OptBracket:
    lower: int
    upper: int
    candidates: int
    cells: int
    solution: list  # candidate positions achieving ``upper``
    basis: str = "lattice"
    certified: int | None = None  # disjoint-visibility witness bound

    @property
    def exact(self) -> int | None:
        return self.lower if self.lower == self.upper else None

    def report_line(self) -> str:
        e = "none" if self.exact is None else str(self.exact)
        line = (f"ORACLE lower={self.lower} upper={self.upper} exact={e} "
                f"candidates={self.candidates} cells={self.cells} basis={self.basis} "
                f"scope={'candidate-restricted' if self.basis == 'lattice' else 'unrestricted'}")
        if self.certified is not None:
            line += f" certified={self.certified}"
        return line


def candidate_positions(P: OrthoUnitPolygon) -> list[Point]:
    pts = [(mpq(x), mpq(y)) for x, y in P.lattice_points]
    pts += [(mpq(2 * i + 1, 2), mpq(2 * j + 1, 2)) for i, j in sorted(P.cells)]
    return pts


def _on_boundary_edge(P, a, b) -> bool:
    return all(point_location(P, (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
               is Location.BOUNDARY for t in (mpq(1, 4), mpq(1, 2), mpq(3, 4)))


def arrangement_candidates(P: OrthoUnitPolygon) -> list[Point]:
    """Vertices of the arrangement of lattice-point visibility windows."""
    segs = []
    for q in P.lattice_points:
        V = visibility_polygon(P, q)
        ring = V.vertices
        for i in range(len(ring)):
            a, b = ring[i], ring[(i + 1) % len(ring)]
            if not _on_boundary_edge(P, a, b):
                segs.append((a, b))
        segs.extend(V.spikes)
    segs = sorted(set(tuple(sorted(s)) for s in segs))
    pts = {(mpq(x), mpq(y)) for x, y in P.vertices}
    for a, b in segs:
        pts.add(a)
        pts.add(b)
    boxes = [(min(a[0], b[0]), max(a[0], b[0]), min(a[1], b[1]), max(a[1], b[1])) for a, b in segs]
    for i in range(len(segs)):
        a, b = segs[i]
        bi = boxes[i]
        for j in range(i + 1, len(segs)):
            bj = boxes[j]
            if bi[1] < bj[0] or bj[1] < bi[0] or bi[3] < bj[2] or bj[3] < bi[2]:
                continue
            x = crossing_point(a, b, *segs[j])
            if x is not None:
                pts.add(x)
    return sorted(pts)


def _corner_masks_from_vis(P, candidates, cells) -> list[int]:
    by_corner = {q: visibility_polygon(P, q) for q in P.lattice_points}
    masks = []
    for g in candidates:
        seen = {q for q, V in by_corner.items() if V.sees(g)}
        m = 0
        for k, (i, j) in enumerate(cells):
            if (i, j) in seen and (i + 1, j) in seen and (i, j + 1) in seen and (i + 1, j + 1) in seen:
                m |= 1 << k
        masks.append(m)
    return masks


def coverage_matrix(P: OrthoUnitPolygon, candidates: list[Point], cells: list) -> list[int]:
    """Bitmask per candidate: bit k set iff cell k is entirely seen.

    A point sees a convex subset of a simply connected polygon iff it sees
    the subset's corners, so a cell is covered iff its four lattice corners
    are visible.
    """
    seen_cache: dict = {}

    def sees(g, q):
        key = (g, q) if g <= q else (q, g)
        hit = seen_cache.get(key)
        if hit is None:
            hit = seen_cache[key] = segment_in_polygon(P, g, q)
        return hit

    masks = []
    for g in candidates:
        m = 0
        for k, (i, j) in enumerate(cells):
            if all(sees(g, (mpq(x), mpq(y))) for x, y in ((i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1))):
                m |= 1 << k
        masks.append(m)
    return masks


def _popcount(m: int) -> int:
    return bin(m).count("1")


def exact_set_cover(masks: list[int], full: int) -> list[int]:
    """Indices of a minimum sub-family whose union is ``full``."""
    # drop dominated and duplicate masks
    order = sorted(range(len(masks)), key=lambda i: (-_popcount(masks[i]), i))
    kept: list[int] = []
    for i in order:
        m = masks[i]
        if m and not any(masks[j] | m == masks[j] for j in kept):
            kept.append(i)
    covering: dict[int, list[int]] = {}
    for k in range(full.bit_length()):
        if full >> k & 1:
            covering[k] = [i for i in kept if masks[i] >> k & 1]
    best_size = len(kept) + 1
    best: list[int] = []
    # greedy start
    rem, pick = full, []
    while rem:
        i = max(kept, key=lambda i: (_popcount(masks[i] & rem), -i))
        pick.append(i)
        rem &= ~masks[i]
    best_size, best = len(pick), pick
    maxcov = max(_popcount(masks[i]) for i in kept)

    def rec(rem: int, chosen: list[int]):
        nonlocal best_size, best
        if not rem:
            if len(chosen) < best_size:
                best_size, best = len(chosen), list(chosen)
            return
        if len(chosen) + -(-_popcount(rem) // maxcov) >= best_size:
            return
        # branch on the uncovered cell with the fewest options
        k = min((k for k in covering if rem >> k & 1), key=lambda k: len(covering[k]))
        for i in sorted(covering[k], key=lambda i: -_popcount(masks[i] & rem)):
            chosen.append(i)
            rec(rem & ~masks[i], chosen)
            chosen.pop()

    rec(full, [])
    return sorted(best)


def _witness_lower(masks: list[int], ncells: int) -> int:
    G = nx.Graph()
    G.add_nodes_from(range(ncells))
    for a in range(ncells):
        for b in range(a + 1, ncells):
            both = (1 << a) | (1 << b)
            if not any(m & both == both for m in masks):
                G.add_edge(a, b)
    _, weight = nx.max_weight_clique(G, weight=None)
    return weight


def _closed_disjoint(A, B) -> bool:
    """Closed visibility regions (rings plus spikes) share no point."""
    segs_a = [(A.vertices[i], A.vertices[(i + 1) % len(A.vertices)]) for i in range(len(A.vertices))]
    segs_b = [(B.vertices[i], B.vertices[(i + 1) % len(B.vertices)]) for i in range(len(B.vertices))]
    segs_a += A.spikes
    segs_b += B.spikes
    if any(point_in_ring(B.vertices, p) >= 0 for s in segs_a for p in s):
        return False
    if any(point_in_ring(A.vertices, p) >= 0 for s in segs_b for p in s):
        return False
    return not any(segments_touch(a0, a1, b0, b1) for a0, a1 in segs_a for b0, b1 in segs_b)


def certified_lower(P: OrthoUnitPolygon, points: list[Point]) -> int:
    """Largest set of points with pairwise disjoint closed visibility
    regions; no single guard sees two of them."""
    vis = [visibility_polygon(P, p) for p in points]
    G = nx.Graph()
    G.add_nodes_from(range(len(points)))
    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            if _closed_disjoint(vis[a], vis[b]):
                G.add_edge(a, b)
    _, weight = nx.max_weight_clique(G, weight=None)
    return weight


def min_guards(P: OrthoUnitPolygon, max_cells: int = DEFAULT_MAX_CELLS,
               basis: str = "auto", certify: bool | None = None) -> OptBracket:
    cells = sorted(P.cells)
    if len(cells) > max_cells:
        raise InstanceTooLarge(f"{len(cells)} cells exceeds cap {max_cells}")
    if basis == "auto":
        basis = "arrangement" if len(cells) <= ARRANGEMENT_MAX_CELLS else "lattice"
    if basis == "arrangement":
        cands = arrangement_candidates(P)
        masks = _corner_masks_from_vis(P, cands, cells)
    elif basis == "lattice":
        cands = candidate_positions(P)
        masks = coverage_matrix(P, cands, cells)
    else:
        raise ValueError(f"unknown candidate basis {basis!r}")
    full = (1 << len(cells)) - 1
    chosen = exact_set_cover(masks, full)
    lower = _witness_lower(masks, len(cells))
    if certify is None:
        certify = len(cells) <= CERTIFY_MAX_CELLS
    cert = certified_lower(P, candidate_positions(P)) if certify else None
    return OptBracket(lower, len(chosen), len(cands), len(cells), [cands[i] for i in chosen],
                      basis, cert)


def format_point(p: Point) -> str:
    return f"{fmt_q(p[0])} {fmt_q(p[1])}"
