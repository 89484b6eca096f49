"""Regenerate the shipped fixtures and their golden outputs.

Run from the repo root:  python3 scripts/make_fixtures.py
"""

from __future__ import annotations

from pathlib import Path

from orthoguard.cli import main
from orthoguard.formats import write_polygon
from orthoguard.generators import gen_macuahuitl
from orthoguard.geometry import rotate90

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def polygons():
    return {"plus12": gen_macuahuitl(1), "mac28": gen_macuahuitl(3),
            "mac28_rot90": rotate90(gen_macuahuitl(3))}


def golden(name: str, out: Path) -> None:
    src = FIXTURES / f"{name}.oup"
    main(["guard", "-i", str(src), "-o", str(out / f"{name}.grd"),
          "--report", str(out / f"{name}.report"), "--svg", str(out / f"{name}.svg")])
    main(["decompose", "-i", str(src), "--matchings", "-o", str(out / f"{name}.dump"),
          "--svg", str(out / f"{name}.decomp.svg")])


if __name__ == "__main__":
    FIXTURES.mkdir(exist_ok=True)
    for name, P in polygons().items():
        write_polygon(FIXTURES / f"{name}.oup", P)
        golden(name, FIXTURES)
        print(f"wrote {name}")
