"""Exact guard placement for ortho-unit polygons."""

from .decomposition import Decomposition, decompose
from .generators import gen_double_comb, gen_macuahuitl, gen_random
from .geometry import OrthoUnitPolygon, validate_polygon
from .oracle import min_guards
from .placement import audit_ledger, bound, place_guards
from .visibility import union_covers, visibility_polygon

__all__ = [
    "Decomposition", "OrthoUnitPolygon", "audit_ledger", "bound", "decompose",
    "gen_double_comb", "gen_macuahuitl", "gen_random", "min_guards", "place_guards",
    "union_covers", "validate_polygon", "visibility_polygon",
]
