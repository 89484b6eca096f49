from __future__ import annotations

import subprocess
import sys

from conftest import FIXTURES
from orthoguard.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_guard_then_verify(tmp_path, capsys):
    grd = tmp_path / "m.grd"
    code, out, _ = run(["guard", "-i", str(FIXTURES / "mac28.oup"), "-o", str(grd)], capsys)
    assert code == 0
    assert "guards=3 bound=3 covered=true" in out
    code, out, _ = run(["verify", "-i", str(FIXTURES / "mac28.oup"), "-g", str(grd)], capsys)
    assert code == 0 and out.startswith("covered=true")


def test_verify_two_guards_fails(tmp_path, capsys):
    grd = tmp_path / "two.grd"
    grd.write_text("2\n2 1\n5 1\n")
    code, out, _ = run(["verify", "-i", str(FIXTURES / "mac28.oup"), "-g", str(grd)], capsys)
    assert code == 2
    assert "WITNESS" in out


def test_verify_guard_outside(tmp_path, capsys):
    grd = tmp_path / "out.grd"
    grd.write_text("1\n5/2 3/2\n")
    code, out, _ = run(["verify", "-i", str(FIXTURES / "mac28.oup"), "-g", str(grd)], capsys)
    assert code == 2 and "GuardOutside" in out


def test_validate(tmp_path, capsys):
    bad = tmp_path / "rect.oup"
    bad.write_text("4\n0 0\n2 0\n2 1\n0 1\n")
    code, out, _ = run(["validate", "-i", str(bad)], capsys)
    assert code == 1 and "NonUnitEdge" in out
    code, out, _ = run(["validate", "-i", str(FIXTURES / "plus12.oup")], capsys)
    assert code == 0 and out == "OK n=12 area=5 reflex=4\n"


def test_usage_errors(tmp_path, capsys):
    assert run(["guard"], capsys)[0] == 4
    assert run(["verify", "-i", str(FIXTURES / "mac28.oup")], capsys)[0] == 4
    assert run(["guard", "-i", str(tmp_path / "missing.oup")], capsys)[0] == 4
    assert run(["gen", "--family", "random"], capsys)[0] == 4
    assert run(["oracle", "-i", str(FIXTURES / "mac28.oup"), "--max-cells", "5"], capsys)[0] == 4
    try:
        main(["frobnicate"])
    except SystemExit as e:
        assert e.code == 4


def test_gen_and_decompose(tmp_path, capsys):
    code, out, _ = run(["gen", "--family", "macuahuitl", "--k", "3"], capsys)
    assert code == 0 and out == (FIXTURES / "mac28.oup").read_text()
    code, _, _ = run(["gen", "--family", "random", "--seed", "5", "--count", "3", "-o", str(tmp_path)], capsys)
    assert code == 0 and len(list(tmp_path.glob("random-*.oup"))) == 3
    code, out, _ = run(["decompose", "-i", str(FIXTURES / "mac28.oup"), "--matchings"], capsys)
    assert "LMATCH tooth=c0 edge=c1,c2 dist=1" in out
    assert "BLAME leaf=c3 comp=c4,c5" in out


def test_oracle_and_bench(capsys):
    code, out, _ = run(["oracle", "-i", str(FIXTURES / "plus12.oup")], capsys)
    assert code == 0 and out.startswith("ORACLE lower=1 upper=1 exact=1")
    code, out, _ = run(["bench", "--seed", "1", "--count", "5", "--max-cells", "20"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "BENCH instances=5 failures=0 max_excess=0"
    assert all(line.startswith("instance=random-") for line in lines[:-1])


def test_render(tmp_path, capsys):
    svg = tmp_path / "m.svg"
    code, _, _ = run(["render", "-i", str(FIXTURES / "mac28.oup"), "-g", str(FIXTURES / "mac28.grd"),
                      "--decomposition", "--vis", "--svg", str(svg)], capsys)
    assert code == 0
    text = svg.read_text()
    assert text.count('class="vis"') == 3 and text.count('class="guard"') == 3


def test_timings_are_opt_in(capsys):
    _, out, err = run(["guard", "-i", str(FIXTURES / "plus12.oup")], capsys)
    assert "t_" not in err
    _, _, err = run(["guard", "-i", str(FIXTURES / "plus12.oup"), "--timings"], capsys)
    assert "t_decompose=" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "orthoguard", "validate", "-i", str(FIXTURES / "mac28.oup")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("OK n=28")
