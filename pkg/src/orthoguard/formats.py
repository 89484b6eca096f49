"""Text formats: ``.oup`` polygons and ``.grd`` guard sets."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from gmpy2 import mpq

from .geometry import OrthoUnitPolygon, Point, validate_polygon

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$|^[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?$")
_ASSIGN = re.compile(r"^ASSIGN\s+col=c(\d+)\s+guard=(\d+)$")


class FormatError(ValueError):
    pass


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def parse_oup(text: str) -> list[tuple[int, int]]:
    """Raw vertex list from ``.oup`` text (not yet validated)."""
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty polygon file")
    no, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise FormatError(f"line {no}: expected vertex count, got {head!r}") from None
    body = lines[1:]
    if len(body) != n:
        raise FormatError(f"header says {n} vertices, found {len(body)}")
    verts = []
    for no, line in body:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {no}: expected 'x y', got {line!r}")
        try:
            verts.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise FormatError(f"line {no}: non-integer coordinate in {line!r}") from None
    return verts


def format_oup(vertices) -> str:
    vs = list(vertices.vertices if isinstance(vertices, OrthoUnitPolygon) else vertices)
    return f"{len(vs)}\n" + "".join(f"{x} {y}\n" for x, y in vs)


def read_polygon(path) -> OrthoUnitPolygon:
    return validate_polygon(parse_oup(Path(path).read_text()))


def write_polygon(path, P) -> None:
    Path(path).write_text(format_oup(P))


def format_rational(v) -> str:
    v = mpq(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_rational(tok: str):
    if not _RATIONAL.match(tok):
        raise FormatError(f"not an exact rational: {tok!r}")
    v = mpq(tok)
    return v


@dataclass
class GuardFile:
    guards: list[Point]
    assignment: dict[int, int] = field(default_factory=dict)


def parse_grd(text: str) -> GuardFile:
    """Guard positions plus optional ASSIGN lines.

    Coordinates may be integers, ``num/den`` or finite decimals; all are
    read exactly.
    """
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty guard file")
    no, head = lines[0]
    try:
        g = int(head)
    except ValueError:
        raise FormatError(f"line {no}: expected guard count, got {head!r}") from None
    if len(lines) - 1 < g:
        raise FormatError(f"header says {g} guards, found {len(lines) - 1} lines")
    guards = []
    for no, line in lines[1:g + 1]:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {no}: expected 'px py', got {line!r}")
        guards.append((parse_rational(parts[0]), parse_rational(parts[1])))
    assignment = {}
    for no, line in lines[g + 1:]:
        m = _ASSIGN.match(line)
        if not m:
            raise FormatError(f"line {no}: unexpected {line!r}")
        col, gi = int(m.group(1)), int(m.group(2))
        if gi >= g:
            raise FormatError(f"line {no}: guard index {gi} out of range")
        assignment[col] = gi
    return GuardFile(guards, assignment)


def format_grd(guards, assignment: dict[int, int] | None = None) -> str:
    out = [f"{len(guards)}\n"]
    out += [f"{format_rational(x)} {format_rational(y)}\n" for x, y in guards]
    for col, gi in sorted((assignment or {}).items()):
        out.append(f"ASSIGN col=c{col} guard={gi}\n")
    return "".join(out)


def read_guards(path) -> GuardFile:
    return parse_grd(Path(path).read_text())
