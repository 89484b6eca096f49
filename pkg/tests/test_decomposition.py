from __future__ import annotations

import networkx as nx
from hypothesis import given, settings

from conftest import random_polygons
from orthoguard.decomposition import decompose, dump, horizontal_cut_from
from orthoguard.generators import gen_double_comb
from orthoguard.geometry import area


def strip_runs(P):
    """Oracle columns: maximal vertical runs of cells in each unit strip."""
    by_x = {}
    for i, j in P.cells:
        by_x.setdefault(i, []).append(j)
    runs = []
    for i, js in sorted(by_x.items()):
        js.sort()
        lo = prev = js[0]
        for j in js[1:] + [None]:
            if j is None or j != prev + 1:
                runs.append((i, lo, prev + 1))
                lo = j
            prev = j
    return runs


def run_adjacency(runs):
    G = nx.Graph()
    G.add_nodes_from(runs)
    for a in runs:
        for b in runs:
            if b[0] == a[0] + 1 and min(a[2], b[2]) - max(a[1], b[1]) >= 1:
                G.add_edge(a, b)
    return G


def brute_corridor(P, x, y, step):
    """Horizontal extension of the unit edge at height y beyond strip x."""
    i = x + step
    while (i, y - 1) in P.cells and (i, y) in P.cells:
        i += step
    return (y, x + 1, i) if step > 0 else (y, i + 1, x)


def test_square(square):
    D = decompose(square)
    assert D.cuts == [] and len(D.columns) == 1 and D.teeth == {}


def test_plus12(plus12):
    D = decompose(plus12)
    assert [(c.x, c.ylo, c.yhi) for c in D.cuts] == [(1, 0, 1), (2, 0, 1)]
    assert [c.height for c in D.columns] == [1, 3, 1]
    assert sorted(tuple(sorted((a, b))) for a, b, _ in D.tree.edges) == [(0, 1), (1, 2)]
    assert sorted(D.teeth) == [0, 2]
    assert set(D.tooth_graph.edges) == {frozenset({0, 2})}
    assert sorted(c.y for c in D.tooth_graph.edges[frozenset({0, 2})]) == [0, 1]
    hc = horizontal_cut_from(plus12, (1, 1))
    assert (hc.y, hc.xlo, hc.xhi) == (1, 1, 2)


def test_mac28(mac28):
    D = decompose(mac28)
    assert [(c.x, c.ylo, c.yhi) for c in D.cuts] == [(x, 0, 1) for x in range(1, 7)]
    assert [c.height for c in D.columns] == [1, 3, 1, 3, 1, 3, 1]
    assert sorted(D.teeth) == [0, 6]
    assert D.tooth_graph.edges == {}
    t0 = D.tooth_cuts[0][1]
    assert (t0.y, t0.xlo, t0.xhi) == (1, 1, 2)
    assert dump(D).splitlines()[:2] == ["COL 0 0 1 1 leaf", "COL 1 -1 2 3 internal"]


def test_rotated_mac28_is_star(mac28_rot):
    D = decompose(mac28_rot)
    center = max(D.columns, key=lambda c: c.height)
    assert center.height == 7
    assert D.tree.degree(center.index) == 6
    assert len(D.teeth) == 6
    comps = D.tooth_graph.components()
    assert len(comps) == 3 and all(len(c) == 2 for c in comps)


def test_double_comb_star():
    for k in range(1, 6):
        D = decompose(gen_double_comb(k))
        assert max(c.height for c in D.columns) == 2 * k + 1
        assert len(D.teeth) == 2 * k


@settings(max_examples=80, deadline=None)
@given(random_polygons)
def test_structure_matches_cell_oracle(P):
    D = decompose(P)
    n = P.n
    assert len(D.reflex) == (n - 4) // 2
    assert len(D.cuts) == n // 4 - 1
    assert len(D.columns) == n // 4
    runs = strip_runs(P)
    assert sorted((c.xlo, c.ylo, c.yhi) for c in D.columns) == sorted(runs)
    G = run_adjacency(runs)
    key = {c.index: (c.xlo, c.ylo, c.yhi) for c in D.columns}
    mine = {frozenset((key[a], key[b])) for a, b, _ in D.tree.edges}
    assert mine == {frozenset(e) for e in G.edges}
    assert nx.is_tree(G)
    assert sum(c.height for c in D.columns) == area(P)
    reflex = set(D.reflex)
    for cut in D.cuts:
        assert cut.lower_end in reflex and cut.upper_end in reflex
    for a, b, _ in D.tree.edges:
        ca, cb = D.columns[a], D.columns[b]
        assert ca.ylo != cb.ylo and ca.yhi != cb.yhi


@settings(max_examples=80, deadline=None)
@given(random_polygons)
def test_teeth_and_tooth_graph(P):
    D = decompose(P)
    if len(D.columns) == 1:
        return
    assert sorted(D.teeth) == sorted(D.tree.leaves)
    corridors = {}
    for t, tooth in D.teeth.items():
        c = D.columns[t]
        assert c.height == 1
        step = 1 if tooth.cut.x == c.xhi else -1
        x = c.xlo
        corridors[t] = {brute_corridor(P, x, c.ylo, step), brute_corridor(P, x, c.yhi, step)}
        # cut side is opposite to the protrusion
        assert tooth.facing == ("left" if step > 0 else "right")
    expected = {frozenset((a, b)) for a in corridors for b in corridors
                if a < b and corridors[a] & corridors[b]}
    assert set(D.tooth_graph.edges) == expected
    H = nx.Graph(list(tuple(e) for e in D.tooth_graph.edges))
    H.add_nodes_from(D.teeth)
    assert max((d for _, d in H.degree), default=0) <= 2
    assert nx.is_forest(H)
