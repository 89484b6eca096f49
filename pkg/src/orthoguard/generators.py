"""Fixture families and a seeded random ortho-unit polygon generator."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass

from .geometry import NotSimple, OrthoUnitPolygon, ValidationError, rotate90, validate_polygon

DEFAULT_RETRY_BUDGET = 4000


class GenerationExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class GenSpec:
    family: str  # "macuahuitl" | "double_comb" | "random"
    k: int
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")

    def build(self) -> OrthoUnitPolygon:
        if self.family == "macuahuitl":
            return gen_macuahuitl(self.k)
        if self.family == "double_comb":
            return gen_double_comb(self.k)
        if self.family == "random":
            return gen_random(self.seed, self.k)
        raise ValueError(f"unknown family {self.family!r}")


def polygon_from_cells(cells) -> OrthoUnitPolygon:
    """Trace the boundary of a union of unit cells and validate it.

    Raises a ValidationError subclass if the union is not a single simple
    ortho-unit polygon.
    """
    cells = set(cells)
    directed = set()
    for i, j in cells:
        for a, b in (((i, j), (i + 1, j)), ((i + 1, j), (i + 1, j + 1)),
                     ((i + 1, j + 1), (i, j + 1)), ((i, j + 1), (i, j))):
            if (b, a) in directed:
                directed.remove((b, a))
            else:
                directed.add((a, b))
    succ = {}
    for a, b in directed:
        if a in succ:
            raise NotSimple(f"boundary touches itself at {a}")
        succ[a] = b
    start = min(succ)
    loop = [start]
    while True:
        nxt = succ[loop[-1]]
        if nxt == start:
            break
        loop.append(nxt)
    if len(loop) != len(succ):
        raise NotSimple("cells do not form a single simply connected region")
    return validate_polygon(loop)


def macuahuitl_cells(k: int) -> set:
    cells = {(x, 0) for x in range(2 * k + 1)}
    for i in range(1, k + 1):
        cells.add((2 * i - 1, 1))
        cells.add((2 * i - 1, -1))
    return cells


def gen_macuahuitl(k: int) -> OrthoUnitPolygon:
    """Corridor [0, 2k+1] x [0, 1] with k unit teeth above and k below."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return polygon_from_cells(macuahuitl_cells(k))


def gen_double_comb(k: int) -> OrthoUnitPolygon:
    return rotate90(gen_macuahuitl(k))


def _rot_cells(cells, r: int) -> set:
    for _ in range(r % 4):
        cells = {(-j - 1, i) for i, j in cells}
    return set(cells)


def _tooth_slots(cells):
    """Height-1 columns with a neighbour on exactly one side.

    Yields (x, y, s) where s = +1 if the tooth protrudes towards +x.
    """
    for x, y in sorted(cells):
        if (x, y - 1) in cells or (x, y + 1) in cells:
            continue
        left, right = (x - 1, y) in cells, (x + 1, y) in cells
        if left and not right:
            yield x, y, 1
        elif right and not left:
            yield x, y, -1


def _grow_moves(x, y, s):
    # +2 columns: a height-3 column beyond the tooth plus a new tooth.
    yield 2, [(x + s, y - 1), (x + s, y), (x + s, y + 1), (x + 2 * s, y)]
    # +1 column: stretch the tooth by two units and hang a tooth off it.
    for dy in (1, -1):
        yield 1, [(x, y + dy), (x, y + 2 * dy), (x + s, y + dy)]


def retry_budget() -> int:
    return int(os.environ.get("ORTHOGUARD_RETRY_BUDGET", DEFAULT_RETRY_BUDGET))


def gen_random(seed: int, target_columns: int) -> OrthoUnitPolygon:
    """Random ortho-unit polygon with exactly ``target_columns`` columns.

    Grows from the unit square by validity-preserving local moves applied
    at teeth, each in a random one of the four rotations of the current
    polygon.  Every intermediate polygon is valid, so rejection only
    happens for local collisions.
    """
    if not 1 <= target_columns <= 64:
        raise ValueError("target_columns must be in 1..64")
    if target_columns == 2:
        # n = 8 admits no ortho-unit polygon
        raise GenerationExhausted("no ortho-unit polygon has exactly 2 columns")
    rng = random.Random(seed)
    budget = retry_budget()
    cells = {(0, 0)}
    columns = 1
    attempts = 0
    while columns < target_columns:
        need = target_columns - columns
        r = rng.randrange(4)
        work = _rot_cells(cells, r)
        slots = list(_tooth_slots(work))
        if columns == 1:
            slots = [(0, 0, rng.choice((1, -1)))]
        rng.shuffle(slots)
        moved = False
        for x, y, s in slots:
            moves = [m for m in _grow_moves(x, y, s) if m[0] <= need]
            rng.shuffle(moves)
            for gain, add in moves:
                attempts += 1
                if attempts > budget:
                    raise GenerationExhausted(
                        f"seed={seed} target={target_columns}: retry budget {budget} spent")
                if any(c in work for c in add):
                    continue
                trial = work | set(add)
                try:
                    polygon_from_cells(trial)
                except ValidationError:
                    continue
                cells = _rot_cells(trial, 4 - r)
                columns += gain
                moved = True
                break
            if moved:
                break
        if not moved:
            attempts += 1
            if attempts > budget:
                raise GenerationExhausted(f"seed={seed} target={target_columns}: stuck")
    mx = min(i for i, _ in cells)
    my = min(j for _, j in cells)
    return polygon_from_cells({(i - mx, j - my) for i, j in cells})


def corpus_target(seed: int, max_columns: int = 40) -> int:
    """Column count used for corpus instance ``seed`` (never 2)."""
    choices = [1] + list(range(3, max_columns + 1))
    return random.Random(f"corpus:{seed}").choice(choices)


def corpus(seeds, max_columns: int = 40):
    for s in seeds:
        yield s, gen_random(s, corpus_target(s, max_columns))
