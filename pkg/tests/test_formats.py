from __future__ import annotations

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURES
from orthoguard.formats import (FormatError, format_grd, format_oup, format_rational, parse_grd,
                                parse_oup, parse_rational, read_polygon)
from orthoguard.geometry import validate_polygon
from orthoguard.render import render_svg


def test_oup_roundtrip_fixtures():
    for name in ("plus12", "mac28", "mac28_rot90"):
        text = (FIXTURES / f"{name}.oup").read_text()
        assert format_oup(parse_oup(text)) == text
        assert format_oup(read_polygon(FIXTURES / f"{name}.oup")) == text


def test_oup_comments_and_errors():
    text = "# square\n4\n0 0\n\n1 0  # edge\n1 1\n0 1\n"
    assert parse_oup(text) == [(0, 0), (1, 0), (1, 1), (0, 1)]
    for bad in ("", "x\n", "4\n0 0\n1 0\n1 1\n", "1\n0.5 0\n", "1\n0 0 0\n"):
        with pytest.raises(FormatError):
            parse_oup(bad)


def test_rationals():
    assert parse_rational("7/2") == mpq(7, 2)
    assert parse_rational("-3") == -3
    assert parse_rational("0.25") == mpq(1, 4)
    assert parse_rational("1e1") == 10
    for bad in ("nan", "1/0x", "inf", "", "1//2"):
        with pytest.raises(FormatError):
            parse_rational(bad)
    assert format_rational(mpq(7, 2)) == "7/2" and format_rational(mpq(4)) == "4"


@given(st.lists(st.tuples(st.fractions(), st.fractions()), min_size=1, max_size=6))
def test_grd_roundtrip(points):
    guards = [(mpq(x.numerator, x.denominator), mpq(y.numerator, y.denominator)) for x, y in points]
    assignment = {c: c % len(guards) for c in range(4)}
    text = format_grd(guards, assignment)
    back = parse_grd(text)
    assert back.guards == guards and back.assignment == assignment
    assert format_grd(back.guards, back.assignment) == text


def test_grd_errors():
    for bad in ("", "2\n0 0\n", "1\n0 0\nASSIGN col=c0 guard=3\n", "1\n0 0\nnoise\n"):
        with pytest.raises(FormatError):
            parse_grd(bad)


def test_svg_elements(plus12, mac28):
    from orthoguard.decomposition import decompose
    svg = render_svg(plus12)
    assert svg.count('class="outline"') == 1
    assert svg.count(" L ") == 11
    svg = render_svg(mac28, decomposition=decompose(mac28))
    assert svg.count('class="cut"') == 6
    assert svg.count('class="label"') == 7
    svg = render_svg(mac28, guards=[(2, 1), (5, 1), (mpq(7, 2), mpq(1, 2))])
    assert svg.count('class="guard"') == 3
    assert render_svg(validate_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])).startswith("<svg")
