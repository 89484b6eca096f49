from __future__ import annotations

import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_polygons
from orthoguard.decomposition import decompose
from orthoguard.generators import gen_macuahuitl
from orthoguard.matching import (NoAlternatingPath, alternating_path_swap, build_forests,
                                 candidate_interior_edges, compute_blames, component_roots,
                                 f_matching, guarding_interior_edges, l_matching, odd_components,
                                 prop1_matching, saturated, select_root, t_matching,
                                 tooth_edge_distance)


def path_adj(n):
    return {i: [j for j in (i - 1, i + 1) if 0 <= j < n] for i in range(n)}


def pipeline(P):
    D = decompose(P)
    L = l_matching(D)
    forests = build_forests(D, L)
    root = select_root(D, L)
    return D, L, forests, root


def test_prop1_examples():
    assert prop1_matching(path_adj(3), 0) == {(0, 1)}
    star = {0: [3], 1: [3], 2: [3], 3: [0, 1, 2]}
    assert prop1_matching(star, 0) == {(0, 3)}
    assert prop1_matching(path_adj(5), 0) == {(0, 1), (2, 3)}
    assert prop1_matching({0: []}, 0) == set()


def test_alternating_swap_examples():
    assert alternating_path_swap(path_adj(4), {(1, 2)}, 0) == {(0, 1), (2, 3)}
    assert alternating_path_swap(path_adj(5), {(0, 1), (2, 3)}, 4) == {(1, 2), (3, 4)}
    with pytest.raises(NoAlternatingPath):
        alternating_path_swap(path_adj(2), {(0, 1)}, 0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 9), min_size=0, max_size=10), st.data())
def test_prop1_saturates_root_and_interior(prufer, data):
    n = len(prufer) + 2
    seq = [p % n for p in prufer]
    G = nx.from_prufer_sequence(seq)
    adj = {v: sorted(G[v]) for v in G}
    leaves = [v for v in adj if len(adj[v]) == 1]
    x = data.draw(st.sampled_from(leaves))
    M = prop1_matching(adj, x)
    assert nx.is_matching(G, M)
    need = {x} | {v for v in adj if len(adj[v]) > 1}
    assert need <= saturated(M)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 7), min_size=1, max_size=8), st.data())
def test_swap_keeps_interior_saturated(prufer, data):
    n = len(prufer) + 2
    G = nx.from_prufer_sequence([p % n for p in prufer])
    adj = {v: sorted(G[v]) for v in G}
    leaves = [v for v in adj if len(adj[v]) == 1]
    x = data.draw(st.sampled_from(leaves))
    M = prop1_matching(adj, x)
    free = [v for v in leaves if v not in saturated(M)]
    if not free:
        return
    leaf = data.draw(st.sampled_from(free))
    M2 = alternating_path_swap(adj, M, leaf)
    assert nx.is_matching(G, M2)
    assert leaf in saturated(M2)
    assert {v for v in adj if len(adj[v]) > 1} <= saturated(M2)


def test_family_matchings():
    D, L, forests, root = pipeline(gen_macuahuitl(1))
    assert odd_components(D) == [] and L.pairs == []
    assert forests.fprime_components == [] and forests.f_vertices == frozenset({0, 1, 2})
    assert root == 0
    assert t_matching(D, L) == [(0, 2)]
    assert f_matching(forests, component_roots(D, forests, root)) == {(0, 1)}

    D, L, forests, root = pipeline(gen_macuahuitl(3))
    assert [c.teeth for c in odd_components(D)] == [(0,), (6,)]
    comp0 = odd_components(D)[0]
    assert [c.edge for c in candidate_interior_edges(D, comp0)] == [(1, 2)]
    assert [(p.tooth, p.edge, p.corridor.y) for p in L.pairs] == [(0, (1, 2), 1), (6, (4, 5), 1)]
    assert forests.fprime_components == [frozenset({1, 2}), frozenset({4, 5})]
    assert forests.f_vertices == frozenset({3})
    assert root == 0
    blame = compute_blames(D, forests, root)
    assert blame.dump(forests) == ["BLAME leaf=c3 comp=c4,c5"]
    assert t_matching(D, L) == []

    D, L, forests, root = pipeline(gen_macuahuitl(4))
    assert [(p.tooth, p.edge) for p in L.pairs] == [(0, (1, 2)), (8, (6, 7))]
    assert forests.f_vertices == frozenset({3, 4, 5})
    assert compute_blames(D, forests, root).dump(forests) == ["BLAME leaf=c5 comp=c6,c7"]
    assert f_matching(forests, component_roots(D, forests, root)) == {(3, 4)}

    D = decompose(gen_macuahuitl(5))
    comps = odd_components(D)
    assert [[c.edge for c in candidate_interior_edges(D, k)] for k in comps] == [[(1, 2)], [(8, 9)]]


def test_rotated_mac28_matchings(mac28_rot):
    D, L, forests, root = pipeline(mac28_rot)
    assert odd_components(D) == []
    assert root == min(D.teeth)
    assert len(t_matching(D, L)) == 3


def brute_min_cost(D):
    comps = odd_components(D)
    dcache = {}
    options = []
    for c in comps:
        opts = {}
        for cand in guarding_interior_edges(D, c):
            d = tooth_edge_distance(D.tree, cand.tooth, cand.edge, dcache)
            opts[cand.edge] = min(d, opts.get(cand.edge, d))
        options.append(opts)
    best = None
    for choice in itertools.product(*[list(o.items()) for o in options]):
        edges = [e for e, _ in choice]
        if len(set(edges)) == len(edges):
            cost = sum(d for _, d in choice)
            best = cost if best is None else min(best, cost)
    return best


@settings(max_examples=60, deadline=None)
@given(random_polygons)
def test_l_matching_is_minimal_and_saturating(P):
    D = decompose(P)
    if len(D.columns) == 1:
        return
    comps = odd_components(D)
    L = l_matching(D)
    assert sorted(p.component.teeth for p in L.pairs) == sorted(c.teeth for c in comps)
    assert len(L.edges) == len(L.pairs)
    for p in L.pairs:
        assert D.tree.is_interior_edge(p.edge)
        assert p.tooth in (p.component.top, p.component.bottom)
    if len(comps) <= 5:
        assert sum(p.dist for p in L.pairs) == brute_min_cost(D)


@settings(max_examples=60, deadline=None)
@given(random_polygons)
def test_forests_partition_and_blame(P):
    D = decompose(P)
    if len(D.columns) == 1:
        return
    L = l_matching(D)
    forests = build_forests(D, L)
    fp = forests.fprime_vertices
    parts = [fp, forests.f_vertices, forests.matched_teeth]
    assert sum(len(s) for s in parts) == len(D.columns)
    assert frozenset().union(*parts) == frozenset(range(len(D.columns)))
    root = select_root(D, L)
    blame = compute_blames(D, forests, root)
    blamers = list(blame.by_component.values())
    assert len(blamers) == len(set(blamers))
    # minimality consequence: interior edges between a tooth and its edge are matched
    for p in L.pairs:
        a, b = p.edge
        near = a if D.tree.distances(p.tooth)[a] < D.tree.distances(p.tooth)[b] else b
        walk = D.tree.path(p.tooth, near)
        for u, v in zip(walk, walk[1:]):
            e = (min(u, v), max(u, v))
            if D.tree.is_interior_edge(e):
                assert e in L.edges
    roots = component_roots(D, forests, root)
    M = f_matching(forests, roots)
    sat = saturated(M)
    for comp in forests.f_components():
        for v in comp:
            if len(forests.f_adj[v]) > 1:
                assert v in sat
        r = roots[comp[0]]
        if len(comp) > 1 and len(forests.f_adj[r]) == 1:
            assert r in sat
    for comp in D.tooth_graph.components(exclude=L.teeth):
        assert len(comp) % 2 == 0
    pairs = t_matching(D, L)
    for a, b in pairs:
        assert frozenset((a, b)) in D.tooth_graph.edges
