"""Command-line entry point: ``python -m orthoguard <command> ...``.

Exit codes: 0 success, 1 invalid polygon, 2 verification or coverage
failure, 3 internal invariant violation, 4 usage error.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .decomposition import DecompositionBug, InvariantViolation, decompose, dump
from .formats import FormatError, format_grd, format_oup, read_guards, read_polygon
from .generators import GenerationExhausted, GenSpec, corpus_target, gen_random
from .geometry import ValidationError, area
from .matching import HallViolation, NoAlternatingPath, OddComponentRemains, dump_tmatching
from .oracle import DEFAULT_MAX_CELLS, InstanceTooLarge, min_guards
from .placement import (AuditFailure, BoundViolation, VerificationFailure, audit_ledger, bound,
                        place_guards)
from .render import render_svg
from .visibility import GuardOutside, fmt_q, union_covers, visibility_polygon

EXIT_OK, EXIT_INVALID, EXIT_UNCOVERED, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2, 3, 4
INTERNAL_ERRORS = (BoundViolation, AuditFailure, DecompositionBug, InvariantViolation,
                   HallViolation, OddComponentRemains, NoAlternatingPath)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunReport:
    instance: str
    n: int
    columns: int
    teeth: int
    guards: int
    bound: int
    covered: bool
    oracle: str | None = None
    timings: dict = field(default_factory=dict)

    def line(self) -> str:
        parts = [f"instance={self.instance}", f"n={self.n}", f"columns={self.columns}",
                 f"teeth={self.teeth}", f"guards={self.guards}", f"bound={self.bound}",
                 f"covered={'true' if self.covered else 'false'}"]
        if self.oracle:
            parts.append(self.oracle)
        parts += [f"t_{k}={v:.4f}" for k, v in self.timings.items()]
        return " ".join(parts)


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _load(args):
    if not args.input:
        raise UsageError("--input is required")
    return read_polygon(args.input)


def _bound_of(P) -> int:
    return bound(P.n) if P.n >= 12 else 1


def guard_instance(P, name: str, timings: bool = False, oracle_cells: int | None = None):
    t = {}
    t0 = time.perf_counter()
    D = decompose(P)
    t["decompose"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    ledger = place_guards(P, D)
    t["place"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    audit_ledger(ledger, D)
    cov = union_covers(P, ledger.positions)
    t["verify"] = time.perf_counter() - t0
    orc = None
    if oracle_cells is not None and len(P.cells) <= oracle_cells:
        t0 = time.perf_counter()
        b = min_guards(P, max_cells=oracle_cells)
        orc = (f"oracle_lower={b.lower} oracle_upper={b.upper} "
               f"oracle_exact={'none' if b.exact is None else b.exact} oracle_basis={b.basis}")
        t["oracle"] = time.perf_counter() - t0
    rep = RunReport(name, P.n, len(D.columns), len(D.teeth), len(ledger.guards), _bound_of(P),
                    cov.covered, orc, t if timings else {})
    return ledger, rep, cov


def cmd_gen(args) -> int:
    family = args.family
    if family == "random" and args.seed is None:
        raise UsageError("--seed is required for the random family")
    count = args.count or 1
    outs = []
    for i in range(count):
        seed = (args.seed or 0) + i
        k = args.k
        if k is None:
            if family != "random":
                raise UsageError("--k is required")
            k = corpus_target(seed)
        outs.append(format_oup(GenSpec(family, k, seed).build()))
    if count == 1:
        _emit(outs[0], args.output)
    else:
        if not args.output:
            raise UsageError("--output directory is required with --count > 1")
        d = Path(args.output)
        d.mkdir(parents=True, exist_ok=True)
        for i, text in enumerate(outs):
            (d / f"{family}-{(args.seed or 0) + i}.oup").write_text(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    P = _load(args)
    print(f"OK n={P.n} area={area(P)} reflex={len(P.reflex_set)}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    P = _load(args)
    D = decompose(P)
    text = dump(D)
    if args.matchings and len(D.columns) > 1:
        ledger = place_guards(P, D)
        extra = ledger.lmatching.dump() + ledger.blame.dump(ledger.forests) + dump_tmatching(ledger.tmatching)
        text += "".join(line + "\n" for line in extra)
    _emit(text, args.output)
    if args.svg:
        Path(args.svg).write_text(render_svg(P, decomposition=D))
    return EXIT_OK


def cmd_guard(args) -> int:
    P = _load(args)
    ledger, rep, cov = guard_instance(P, Path(args.input).stem, args.timings)
    _emit(format_grd(ledger.positions, ledger.column_assignment), args.output)
    line = rep.line() + "\n"
    if args.report:
        Path(args.report).write_text(line)
    # without -o the .grd itself goes to stdout
    (sys.stdout if args.output else sys.stderr).write(line)
    if args.svg:
        Path(args.svg).write_text(render_svg(P, ledger.positions, ledger.decomposition))
    return EXIT_OK if cov.covered and rep.guards <= rep.bound else EXIT_UNCOVERED


def cmd_verify(args) -> int:
    P = _load(args)
    if not args.guards:
        raise UsageError("--guards is required")
    gf = read_guards(args.guards)
    try:
        cov = union_covers(P, gf.guards)
    except GuardOutside as e:
        print(f"covered=false error=GuardOutside detail=\"{e}\"")
        return EXIT_UNCOVERED
    lines = [f"covered={'true' if cov.covered else 'false'} guards={len(gf.guards)} "
             f"area={fmt_q(cov.covered_area)} target={area(P)}"]
    lines += cov.lines()
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text)
    return EXIT_OK if cov.covered else EXIT_UNCOVERED


def cmd_oracle(args) -> int:
    P = _load(args)
    b = min_guards(P, max_cells=args.max_cells or DEFAULT_MAX_CELLS, basis=args.basis)
    cov = union_covers(P, b.solution)
    if not cov.covered:
        raise VerificationFailure("set-cover solution fails coverage")
    text = b.report_line() + "\n"
    _emit(text, args.output)
    if args.report:
        Path(args.report).write_text(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    count = args.count or 10
    start = args.seed if args.seed is not None else 1
    lines = []
    failures = 0
    worst = 0
    for seed in range(start, start + count):
        if args.family == "random":
            k = args.k or corpus_target(seed)
            P = gen_random(seed, k)
        else:
            P = GenSpec(args.family, seed if args.k is None else args.k, seed).build()
        try:
            _, rep, _ = guard_instance(P, f"{args.family}-{seed}", args.timings, args.max_cells)
        except INTERNAL_ERRORS + (VerificationFailure,) as e:
            failures += 1
            lines.append(f"instance={args.family}-{seed} n={P.n} error={type(e).__name__}")
            continue
        if not rep.covered or rep.guards > rep.bound:
            failures += 1
        worst = max(worst, rep.guards - rep.bound)
        lines.append(rep.line())
    lines.append(f"BENCH instances={count} failures={failures} max_excess={worst}")
    text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    if args.report:
        Path(args.report).write_text(text)
    return EXIT_OK if failures == 0 else EXIT_UNCOVERED


def cmd_render(args) -> int:
    P = _load(args)
    guards = read_guards(args.guards).guards if args.guards else None
    D = decompose(P) if args.decomposition else None
    vis = [visibility_polygon(P, g) for g in guards] if guards and args.vis else None
    text = render_svg(P, guards, D, vis)
    _emit(text, args.output or args.svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orthoguard", description="Guard ortho-unit polygons and verify coverage.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, output=True):
        sp.add_argument("-i", "--input")
        if output:
            sp.add_argument("-o", "--output")
        sp.add_argument("--report")
        return sp

    g = sub.add_parser("gen", help="write a generated polygon")
    g.add_argument("--family", choices=["macuahuitl", "double_comb", "random"], required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--count", type=int)
    g.add_argument("-o", "--output")

    common(sub.add_parser("validate", help="check a .oup file"), output=False)

    d = common(sub.add_parser("decompose", help="dump columns, cuts and tooth graph"))
    d.add_argument("--svg")
    d.add_argument("--matchings", action="store_true", help="also dump the matchings")

    gu = common(sub.add_parser("guard", help="place guards and write a .grd"))
    gu.add_argument("--svg")
    gu.add_argument("--timings", action="store_true", help="append stage timings to the report")

    v = common(sub.add_parser("verify", help="check a .grd against a polygon"), output=False)
    v.add_argument("-g", "--guards")

    o = common(sub.add_parser("oracle", help="bracket the minimum guard number"))
    o.add_argument("--max-cells", type=int)
    o.add_argument("--basis", choices=["auto", "lattice", "arrangement"], default="auto")

    b = sub.add_parser("bench", help="run the pipeline over generated instances")
    b.add_argument("--family", choices=["macuahuitl", "double_comb", "random"], default="random")
    b.add_argument("--k", type=int)
    b.add_argument("--seed", type=int)
    b.add_argument("--count", type=int)
    b.add_argument("--max-cells", type=int, help="also run the oracle up to this many cells")
    b.add_argument("--timings", action="store_true")
    b.add_argument("-o", "--output")
    b.add_argument("--report")

    r = common(sub.add_parser("render", help="draw a polygon as SVG"))
    r.add_argument("-g", "--guards")
    r.add_argument("--svg")
    r.add_argument("--decomposition", action="store_true")
    r.add_argument("--vis", action="store_true", help="overlay guard visibility regions")
    return p


COMMANDS = {"gen": cmd_gen, "validate": cmd_validate, "decompose": cmd_decompose,
            "guard": cmd_guard, "verify": cmd_verify, "oracle": cmd_oracle,
            "bench": cmd_bench, "render": cmd_render}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except (ValidationError, FormatError) as e:
        print(f"INVALID {e}")
        return EXIT_INVALID
    except VerificationFailure as e:
        print(f"VERIFICATION_FAILURE {e}")
        return EXIT_UNCOVERED
    except INTERNAL_ERRORS as e:
        print(f"INTERNAL {type(e).__name__}: {e}")
        return EXIT_INTERNAL
    except (OSError, InstanceTooLarge, GenerationExhausted, ValueError) as e:
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
