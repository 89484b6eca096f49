from __future__ import annotations

import itertools

import pytest
from gmpy2 import mpq

from conftest import pt
from orthoguard.generators import gen_macuahuitl
from orthoguard.oracle import (InstanceTooLarge, candidate_positions, certified_lower,
                               coverage_matrix, exact_set_cover, min_guards)
from orthoguard.visibility import union_covers


def brute_cover(masks, full):
    for r in range(1, len(masks) + 1):
        for combo in itertools.combinations(range(len(masks)), r):
            acc = 0
            for i in combo:
                acc |= masks[i]
            if acc == full:
                return r
    return None


def test_candidate_counts(square, plus12, mac28):
    assert len(candidate_positions(square)) == 5
    # every lattice point of PLUS12 is a vertex: 12 + 5 centres
    assert len(candidate_positions(plus12)) == 17
    assert len(candidate_positions(mac28)) == 28 + 13


def test_coverage_matrix_examples(square, plus12, mac28):
    assert coverage_matrix(square, [pt("1/2", "1/2")], [(0, 0)]) == [1]
    cells = sorted(plus12.cells)
    assert coverage_matrix(plus12, [pt(1, 1)], cells) == [(1 << len(cells)) - 1]
    cells = [(0, 0), (3, 1)]
    assert coverage_matrix(mac28, [pt("1/2", "1/2")], cells) == [0b01]


def test_set_cover_against_brute_force():
    import random
    rng = random.Random(5)
    for _ in range(200):
        m = rng.randint(1, 7)
        masks = [rng.randrange(1, 1 << m) for _ in range(rng.randint(1, 8))]
        full = 0
        for x in masks:
            full |= x
        assert len(exact_set_cover(masks, full)) == brute_cover(masks, full)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_macuahuitl_exact(k):
    P = gen_macuahuitl(k)
    b = min_guards(P)
    assert (b.lower, b.upper, b.exact) == (k, k, k)
    assert b.basis == "arrangement"
    assert union_covers(P, b.solution).covered


def test_square_and_report(square, mac28):
    assert min_guards(square).exact == 1
    b = min_guards(mac28)
    assert b.report_line() == ("ORACLE lower=3 upper=3 exact=3 candidates=94 cells=13 "
                               "basis=arrangement scope=unrestricted certified=2")


def test_lattice_basis_brackets(mac28):
    b = min_guards(mac28, basis="lattice", certify=False)
    assert b.lower <= b.upper == 3
    assert "scope=candidate-restricted" in b.report_line()
    assert union_covers(mac28, b.solution).covered


def test_certified_lower_is_pairwise_disjoint(plus12):
    # the cross has a guard seeing everything, so no two points are independent
    assert certified_lower(plus12, candidate_positions(plus12)) == 1
    assert isinstance(candidate_positions(plus12)[0][0], type(mpq(0)))


def test_too_large():
    with pytest.raises(InstanceTooLarge):
        min_guards(gen_macuahuitl(3), max_cells=10)
