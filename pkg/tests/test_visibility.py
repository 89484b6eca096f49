from __future__ import annotations

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import pt, random_polygons
from orthoguard.geometry import AxisRect, area, in_polygon, segment_in_polygon
from orthoguard.placement import place_guards
from orthoguard.visibility import (GuardOutside, cell_coverage, point_in_ring, rect_fully_visible,
                                   union_area, union_covers, visibility_polygon)


def random_point(P, data, max_den=12):
    xmin, xmax, ymin, ymax = P.bbox
    while True:
        d = data.draw(st.integers(1, max_den))
        p = (mpq(data.draw(st.integers(xmin * d, xmax * d)), d),
             mpq(data.draw(st.integers(ymin * d, ymax * d)), d))
        if in_polygon(P, p):
            return p


def test_examples(square, plus12, mac28):
    assert visibility_polygon(square, pt("1/2", "1/2")).area == 1
    assert visibility_polygon(plus12, pt(1, 1)).area == 5
    V = visibility_polygon(mac28, pt("1/2", "1/2"))
    assert V.area == mpq(374, 45)
    assert not V.sees(pt("7/2", "3/2"))
    with pytest.raises(GuardOutside):
        visibility_polygon(mac28, pt("5/2", "3/2"))


def test_coverage_examples(square, mac28):
    assert union_covers(square, [pt("1/2", "1/2")]).covered
    assert union_covers(mac28, [pt(2, 1), pt(5, 1), pt("7/2", "1/2")]).covered
    rep = union_covers(mac28, [pt(2, 1), pt(5, 1)])
    assert not rep.covered
    assert rep.covered_area == mpq(47, 4) < area(mac28)
    tooth = AxisRect(3, 4, 1, 2)
    assert any(tooth.contains(w) for w in rep.witnesses)
    for w in rep.witnesses:
        assert in_polygon(mac28, w)
        assert not any(segment_in_polygon(mac28, g, w) for g in (pt(2, 1), pt(5, 1)))


def test_rect_examples(mac28):
    g = pt(2, 1)
    assert rect_fully_visible(mac28, g, AxisRect(0, 1, 0, 1))
    assert not rect_fully_visible(mac28, g, AxisRect(3, 4, 1, 2))
    assert rect_fully_visible(mac28, g, AxisRect(1, 2, -1, 2))


@settings(max_examples=50, deadline=None)
@given(random_polygons, st.data())
def test_membership_matches_segment_test(P, data):
    g = random_point(P, data)
    V = visibility_polygon(P, g)
    assert V.sees(g) and V.contains(g)
    for v in V.vertices:
        assert in_polygon(P, v)
    for _ in range(100):
        q = random_point(P, data)
        s = segment_in_polygon(P, g, q)
        assert V.sees(q) == s
        assert V.contains(q) == s


@settings(max_examples=50, deadline=None)
@given(random_polygons, st.data())
def test_rect_visibility_matches_corners(P, data):
    g = random_point(P, data, max_den=4)
    i, j = data.draw(st.sampled_from(sorted(P.cells)))
    rect = AxisRect(i, i + 1, j, j + 1)
    corners = [(mpq(x), mpq(y)) for x, y in rect.corners]
    assert rect_fully_visible(P, g, rect) == all(segment_in_polygon(P, g, c) for c in corners)


@settings(max_examples=40, deadline=None)
@given(random_polygons, st.data())
def test_deciders_agree_and_area_is_monotone(P, data):
    guards = place_guards(P).positions
    extra = [random_point(P, data, max_den=4) for _ in range(2)]
    pool = guards + extra
    picks = data.draw(st.lists(st.sampled_from(range(len(pool))), min_size=1, max_size=4, unique=True))
    chosen = [pool[k] for k in picks]
    vis = [visibility_polygon(P, g) for g in chosen]
    a = union_covers(P, chosen, vis)
    b = cell_coverage(P, vis)
    assert a.covered == b.covered
    for w in a.witnesses:
        assert not any(point_in_ring(v.vertices, w) >= 0 for v in vis)
    prev = mpq(0)
    for k in range(1, len(vis) + 1):
        cur = union_area([v.vertices for v in vis[:k]])
        assert prev <= cur <= area(P)
        prev = cur
