from __future__ import annotations

from pathlib import Path

import pytest
from gmpy2 import mpq
from hypothesis import strategies as st

from orthoguard.generators import gen_macuahuitl, gen_random
from orthoguard.geometry import rotate90, validate_polygon

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


@pytest.fixture
def square():
    return validate_polygon(SQUARE)


@pytest.fixture
def plus12():
    return gen_macuahuitl(1)


@pytest.fixture
def mac28():
    return gen_macuahuitl(3)


@pytest.fixture
def mac28_rot():
    return rotate90(gen_macuahuitl(3))


def q(s):
    return mpq(s)


def pt(x, y):
    return (mpq(x), mpq(y))


# small random polygons, deterministic per (seed, columns)
random_polygons = st.builds(gen_random, st.integers(1, 10_000), st.sampled_from([1, 3, 4, 5, 6, 8, 10]))


def rationals(lo, hi, max_den=8):
    return st.builds(lambda d, t: mpq(lo) + mpq(t, d) * (hi - lo) / 64,
                     st.integers(1, max_den), st.integers(0, 64))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
