"""Guard placement from the column tree matchings, with a verified ledger.

Every guard carries the columns (teeth included) it is responsible for;
each responsibility is checked with exact rectangle visibility before the
ledger is returned.  The ledger accounting shows 2g + 1 <= n/4, so
g <= (n - 4) / 8.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .decomposition import Decomposition, HorizontalCut, VerticalCut, decompose
from .geometry import OrthoUnitPolygon, Point
from .matching import (BlameMap, Edge, Forests, LMatching, alternating_paths, build_forests,
                       component_roots, compute_blames, edge_key, f_matching, l_matching,
                       saturated, select_root, t_matching, toggle)
from .visibility import rect_fully_visible

L_GUARD = "LGuard"
F_GUARD = "FGuard"
DEDICATED = "Dedicated"
PAIR_GUARD = "PairGuard"
REPOSITIONED = "RepositionedFGuard"


class CorridorMismatch(ValueError):
    pass


class BoundViolation(RuntimeError):
    pass


class VerificationFailure(RuntimeError):
    pass


class AuditFailure(RuntimeError):
    pass


@dataclass
class Guard:
    position: Point
    provenance: str
    columns: tuple[int, ...]  # responsibilities: column indices, teeth included
    edge: Edge | None = None

    @property
    def credit_surplus(self) -> int:
        """Columns beyond two owned outright (repositioned guards)."""
        return max(0, len(self.columns) - 2) if self.provenance == REPOSITIONED else 0


@dataclass
class Credit:
    source: str  # "component" or "surplus"
    ref: int  # F' component id or lending guard index
    claimant: int | None = None


@dataclass
class Ledger:
    guards: list[Guard]
    column_assignment: dict[int, int]
    credits: list[Credit] = field(default_factory=list)
    blame: BlameMap = field(default_factory=BlameMap)
    decomposition: Decomposition | None = field(default=None, repr=False)
    lmatching: LMatching | None = field(default=None, repr=False)
    forests: Forests | None = field(default=None, repr=False)
    root: int | None = None
    fmatching: set = field(default_factory=set)
    tmatching: list = field(default_factory=list)
    cases: dict = field(default_factory=dict)  # T-pair -> "a" | "b" | "c" | "path"
    alternating: bool = False

    @property
    def positions(self) -> list[Point]:
        return [g.position for g in self.guards]

    def assign_lines(self) -> list[str]:
        return [f"ASSIGN col=c{c} guard={i}" for c, i in sorted(self.column_assignment.items())]


def bound(n: int) -> int:
    return (n - 4) // 8


def guard_for_interior_edge(cut: VerticalCut, corridor: HorizontalCut) -> Point:
    if not cut.ylo <= corridor.y <= cut.yhi:
        raise CorridorMismatch(f"corridor y={corridor.y} outside cut {cut}")
    return (mpq(cut.x), mpq(corridor.y))


def cut_points(cut: VerticalCut) -> list[Point]:
    """Lattice and half-lattice points of a vertical cut, bottom to top."""
    return [(mpq(cut.x), mpq(2 * cut.ylo + k, 2)) for k in range(2 * (cut.yhi - cut.ylo) + 1)]


def sees_columns(D: Decomposition, g: Point, cols) -> bool:
    P = D.polygon
    return all(rect_fully_visible(P, g, D.columns[c].rect) for c in cols)


def _shared_corridors(D: Decomposition, a: int, b: int) -> list[HorizontalCut]:
    return sorted(D.tooth_graph.edges[frozenset((a, b))], key=lambda h: -h.y)


def _corridor_mid(h: HorizontalCut) -> Point:
    return (mpq(h.xlo + h.xhi, 2), mpq(h.y))


@dataclass
class _Plan:
    guards: list[Guard]
    cases: dict
    pair_guard_of: dict  # T-pair -> guard index
    fguard_of: dict  # F-matched edge -> guard index


def _build_plan(D: Decomposition, L: LMatching, forests: Forests, M: set[Edge],
                tpairs: list[tuple[int, int]]) -> _Plan:
    tree = D.tree
    guards: list[Guard] = []
    for p in L.pairs:
        cut = tree.cut_of[frozenset(p.edge)]
        cols = (p.edge[0], p.edge[1], p.tooth)
        first = p.position or guard_for_interior_edge(cut, p.corridor)
        pos = next((q for q in [first] + cut_points(cut) if sees_columns(D, q, cols)), None)
        if pos is None:
            raise VerificationFailure(f"no point on cut {cut} sees c{p.tooth} and its columns")
        guards.append(Guard(pos, L_GUARD, cols, p.edge))
    fguard_of = {}
    for e in sorted(M):
        cut = tree.cut_of[frozenset(e)]
        pos = (mpq(cut.x), mpq(cut.ylo + cut.yhi, 2))
        fguard_of[e] = len(guards)
        guards.append(Guard(pos, F_GUARD, e, e))
    sat = saturated(M)
    for v in sorted(forests.f_vertices):
        if v not in sat and not tree.is_leaf(v):
            guards.append(Guard(D.columns[v].rect.center(), DEDICATED, (v,)))
    cases, pair_guard_of = {}, {}
    mate = {}
    for a, b in M:
        mate[a], mate[b] = b, a
    for a, b in tpairs:
        if a in sat and b in sat:
            cases[(a, b)] = "a"
        elif a in sat or b in sat:
            s, u = (a, b) if a in sat else (b, a)
            gi = fguard_of[edge_key(s, mate[s])]
            g = guards[gi]
            cut = D.teeth[s].cut
            cols = tuple(g.columns) + (u,)
            for h in _shared_corridors(D, a, b):
                pos = guard_for_interior_edge(cut, h)
                if sees_columns(D, pos, cols):
                    guards[gi] = Guard(pos, REPOSITIONED, cols, g.edge)
                    break
            else:
                raise VerificationFailure(f"repositioned guard on {cut} cannot see c{u}")
            cases[(a, b)] = "b"
        else:
            for h in _shared_corridors(D, a, b):
                pos = _corridor_mid(h)
                if sees_columns(D, pos, (a, b)):
                    break
            else:
                raise VerificationFailure(f"no corridor guard sees both c{a} and c{b}")
            pair_guard_of[(a, b)] = len(guards)
            guards.append(Guard(pos, PAIR_GUARD, (a, b)))
            cases[(a, b)] = "c"
    return _Plan(guards, cases, pair_guard_of, fguard_of)


def _merge_pair_into_path(D: Decomposition, plan: _Plan, pair, ends_path: list[int]) -> _Plan | None:
    """Replace the pair guard of T-paired teeth by an F-guard on the tree path
    between them that sees both teeth."""
    a, b = pair
    path_edges = [edge_key(u, v) for u, v in zip(ends_path, ends_path[1:])]
    for e in path_edges:
        if e not in plan.fguard_of:
            continue
        gi = plan.fguard_of[e]
        cols = tuple(plan.guards[gi].columns) + (a, b)
        for pos in cut_points(D.tree.cut_of[frozenset(e)]):
            if sees_columns(D, pos, cols):
                guards = list(plan.guards)
                guards[gi] = Guard(pos, REPOSITIONED, cols, e)
                drop = plan.pair_guard_of[pair]
                del guards[drop]
                cases = dict(plan.cases)
                cases[pair] = "path"
                fguard_of = {k: (i if i < drop else i - 1) for k, i in plan.fguard_of.items()}
                pair_guard_of = {k: (i if i < drop else i - 1)
                                 for k, i in plan.pair_guard_of.items() if k != pair}
                return _Plan(guards, cases, pair_guard_of, fguard_of)
    return None


def _within_bound(n: int, plan: _Plan) -> bool:
    return 2 * len(plan.guards) + 1 <= n // 4


def _improve_by_alternating_path(D, L, forests, M, tpairs):
    """Search alternating paths of the F-matching for a plan meeting the bound."""
    tree = D.tree
    partner = {}
    for a, b in tpairs:
        partner[a], partner[b] = b, a
    pairs = set(tpairs)
    adj = forests.f_adj
    for leaf in sorted(v for v in forests.f_vertices if tree.is_leaf(v)):
        for path in alternating_paths(adj, M, leaf, allow_saturated=True):
            end = path[-1]
            M2 = toggle(M, path)
            if partner.get(leaf) != end:
                plan = _build_plan(D, L, forests, M2, tpairs)
                if _within_bound(D.polygon.n, plan):
                    return M2, plan
                continue
            pair = (leaf, end) if (leaf, end) in pairs else (end, leaf)
            for cand in (M, M2):
                sat = saturated(cand)
                if leaf in sat or end in sat:
                    continue
                plan = _build_plan(D, L, forests, cand, tpairs)
                merged = _merge_pair_into_path(D, plan, pair, tree.path(leaf, end))
                if merged is not None and _within_bound(D.polygon.n, merged):
                    return cand, merged
    return None


def _unit_square_ledger(D: Decomposition) -> Ledger:
    g = Guard(D.columns[0].rect.center(), DEDICATED, (0,))
    return Ledger([g], {0: 0}, decomposition=D)


def place_guards(P: OrthoUnitPolygon, D: Decomposition | None = None) -> Ledger:
    D = D or decompose(P)
    if len(D.columns) == 1:
        return _unit_square_ledger(D)
    L = l_matching(D)
    forests = build_forests(D, L)
    root = select_root(D, L)
    roots = component_roots(D, forests, root)
    M = f_matching(forests, roots)
    blame = compute_blames(D, forests, root)
    tpairs = t_matching(D, L)
    plan = _build_plan(D, L, forests, M, tpairs)
    alternating = False
    if not _within_bound(P.n, plan) and not forests.fprime_components \
            and "b" not in plan.cases.values():
        found = _improve_by_alternating_path(D, L, forests, M, tpairs)
        if found is not None:
            M, plan = found
            alternating = True
    if not _within_bound(P.n, plan):
        raise BoundViolation(f"{len(plan.guards)} guards exceed bound {bound(P.n)} (n={P.n})")
    ledger = _make_ledger(D, L, forests, root, blame, M, tpairs, plan)
    ledger.alternating = alternating
    for i, g in enumerate(ledger.guards):
        if not sees_columns(D, g.position, g.columns):
            raise VerificationFailure(f"guard {i} at {g.position} misses a claimed column")
    return ledger


def _make_ledger(D, L, forests, root, blame, M, tpairs, plan) -> Ledger:
    guards = plan.guards
    assign: dict[int, int] = {}
    dist = D.tree.distances(root)
    parents = D.tree.parents(root)
    lguard_of = {g.edge: i for i, g in enumerate(guards) if g.provenance == L_GUARD}
    credits: list[Credit] = []
    for cid, comp in enumerate(forests.fprime_components):
        top = min(comp, key=lambda v: (dist[v], v))
        for v in comp:
            if v != top:
                assign[v] = lguard_of[edge_key(v, parents[v])]
        first = min(e for e in lguard_of if top in e)
        assign[top] = lguard_of[first]
        credits.append(Credit("component", cid))
    for i, g in enumerate(guards):
        if g.provenance == L_GUARD:
            assign[g.columns[2]] = i
        elif g.provenance in (F_GUARD, REPOSITIONED, PAIR_GUARD, DEDICATED):
            for c in g.columns:
                assign.setdefault(c, i)
            if g.credit_surplus:
                credits.extend(Credit("surplus", i) for _ in range(g.credit_surplus))
    for i, g in enumerate(guards):
        if g.provenance != DEDICATED:
            continue
        blamed = set(blame.blamed_by(g.columns[0]))
        pick = next((c for c in credits if c.claimant is None and c.source == "component"
                     and c.ref in blamed), None)
        if pick is None:
            pick = next((c for c in credits if c.claimant is None and c.source == "surplus"), None)
        if pick is not None:
            pick.claimant = i
    return Ledger(list(guards), dict(sorted(assign.items())), credits, blame, D, L, forests,
                  root, set(M), list(tpairs), dict(plan.cases))


# -- audit ----------------------------------------------------------------------

@dataclass
class AuditReport:
    guards: int
    columns: int
    component_counts: list[tuple[int, int, int]]  # (component id, |X|, columns guarded)
    spare_credits: int
    ok: bool = True

    def lines(self) -> list[str]:
        out = [f"AUDIT guards={self.guards} columns={self.columns} spare={self.spare_credits}"]
        out += [f"AUDIT comp={c} edges={x} columns={k}" for c, x, k in self.component_counts]
        return out


def audit_ledger(ledger: Ledger, D: Decomposition | None = None) -> AuditReport:
    D = D or ledger.decomposition
    ncols = len(D.columns)
    guards = ledger.guards
    g = len(guards)
    if set(ledger.column_assignment) != set(range(ncols)):
        raise AuditFailure("column assignment is not total")
    for c, i in ledger.column_assignment.items():
        if c not in guards[i].columns:
            raise AuditFailure(f"c{c} assigned to guard {i} which does not claim it")
    for i, gd in enumerate(guards):
        if not sees_columns(D, gd.position, gd.columns):
            raise AuditFailure(f"guard {i} does not see all of its columns")
    counts = []
    forests = ledger.forests
    if forests is not None:
        for cid, comp in enumerate(forests.fprime_components):
            edges = {e for e in forests.fprime_edges if e[0] in comp}
            cols = set()
            for gd in guards:
                if gd.provenance == L_GUARD and gd.edge in edges:
                    cols.update(gd.columns)
            if len(cols) != 2 * len(edges) + 1:
                raise AuditFailure(f"component {cid}: {len(cols)} columns for {len(edges)} edges")
            counts.append((cid, len(edges), len(cols)))
        claimed: set[int] = set()
        for cr in ledger.credits:
            if cr.claimant is None or cr.source != "component":
                continue
            if cr.ref in claimed:
                raise AuditFailure(f"component {cr.ref} credit claimed twice")
            claimed.add(cr.ref)
            blamer = ledger.blame.by_component.get(cr.ref)
            if blamer is None or blamer not in guards[cr.claimant].columns:
                raise AuditFailure(f"guard {cr.claimant} claims component {cr.ref} it does not blame")
    owned = [0] * g
    for c, i in ledger.column_assignment.items():
        owned[i] += 1
    effective = list(owned)
    for cr in ledger.credits:
        if cr.claimant is None:
            continue
        lender = _credit_holder(ledger, cr)
        effective[lender] -= 1
        effective[cr.claimant] += 1
    for i, e in enumerate(effective):
        if e < 2 and D.polygon.n >= 12:
            raise AuditFailure(f"guard {i} ({guards[i].provenance}) accounts for {e} column(s)")
    spare = sum(effective) - 2 * g
    if D.polygon.n >= 12 and (spare < 1 or 2 * g + 1 > D.polygon.n // 4):
        raise AuditFailure(f"2g+1 = {2 * g + 1} exceeds n/4 = {D.polygon.n // 4}")
    return AuditReport(g, ncols, counts, spare)


def _credit_holder(ledger: Ledger, cr: Credit) -> int:
    if cr.source == "surplus":
        return cr.ref
    comp = ledger.forests.fprime_components[cr.ref]
    dist = ledger.decomposition.tree.distances(ledger.root)
    top = min(comp, key=lambda v: (dist[v], v))
    return ledger.column_assignment[top]
