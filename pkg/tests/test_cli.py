import csv
import io
import json

import pytest

from hhbounds.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_classic_bounds(capsys):
    rc, out, _ = run(capsys, "classic-bounds", "--system", "linear", "--rho", "const:1", "--f", "poly:0,0,1",
                     "--x", "0", "--y", "1")
    assert rc == 0
    r = rows(out)[0]
    assert float(r["lower"]) == pytest.approx(0.25, abs=1e-12)
    assert float(r["integral"]) == pytest.approx(1 / 3, abs=1e-12)
    assert float(r["upper"]) == pytest.approx(0.5, abs=1e-12)


def test_phi_table(capsys, tmp_path):
    dest = tmp_path / "phi.csv"
    rc, out, _ = run(capsys, "phi-table", "--from", "0", "--to", "1", "--step", "0.01", "--tol", "1e-6",
                     "--out", str(dest))
    assert rc == 0 and out == ""
    raw = dest.read_bytes()
    assert b"\r" not in raw and b"," in raw
    table = rows(raw.decode())
    assert len(table) == 101
    assert list(table[0]) == ["sigma", "phi", "cutoff"]
    assert float(table[-1]["sigma"]) == 1.0 and abs(float(table[-1]["phi"])) <= 1e-6


def test_bound_subcommands(capsys):
    rc, out, _ = run(capsys, "lower-thm3", "--system", "linear", "--f", "poly:0,0,1", "--x", "0", "--y", "1",
                     "--error", "measured:grid=17")
    assert rc == 0
    r = rows(out)[0]
    assert list(r) == ["case_id", "x", "y", "lhs", "rhs_main", "error_term", "margin", "theorem"]
    assert r["theorem"] == "thm3" and float(r["margin"]) == pytest.approx(1 / 12, abs=1e-12)
    rc, out, _ = run(capsys, "upper-thm5", "--system", "linear", "--f", "poly:0,0,1", "--x", "0", "--y", "1")
    assert float(rows(out)[0]["margin"]) == pytest.approx(1 / 6, abs=1e-12)
    rc, out, _ = run(capsys, "lower-thm4", "--f", "poly:0,0,1", "--measure", "atoms:[(0,0.5),(1,0.5)]")
    assert float(rows(out)[0]["margin"]) == pytest.approx(0.25, abs=1e-14)
    rc, out, _ = run(capsys, "upper-thm6", "--f", "poly:0,0,1", "--x", "0", "--y", "2")
    r = rows(out)[0]
    assert (float(r["lhs"]), float(r["rhs_main"])) == pytest.approx((4 / 3, 2.0), abs=1e-12)
    rc, out, _ = run(capsys, "upper-cor6b", "--f", "poly:0,0,-1", "--error", "power3:[(1,1,2,1)]")
    assert rc == 0 and float(rows(out)[0]["margin"]) == pytest.approx(-1 / 12, abs=1e-14)


def test_check_system_and_residual(capsys):
    rc, out, _ = run(capsys, "check-system", "--system", "exp")
    assert rc == 0 and rows(out)[0]["ok"] == "true"
    rc, out, _ = run(capsys, "residual", "--system", "linear", "--f", "poly:0,0,1", "--x", "0", "--y", "1",
                     "--u", "0.5")
    assert float(rows(out)[0]["residual"]) == pytest.approx(-0.25)
    rc, out, _ = run(capsys, "residual", "--system", "linear", "--f", "poly:0,0,-1", "--x", "0", "--y", "1")
    assert rows(out)[0]["ok"] == "false"


def test_verify(capsys, tmp_path):
    cfg = tmp_path / "suite.cfg"
    cfg.write_text("theorems = classic, thm3\nspecimens = 2\npairs = 3\n")
    rc, out, _ = run(capsys, "verify", "--config", str(cfg), "--seed", "42")
    assert rc == 0
    doc = json.loads(out)
    assert doc["seed"] == 42 and doc["summary"]["total_cells"] == 12
    cfg.write_text("theorems = classic\nfamily = perturbed\nperturb = 0.5\nspecimens = 3\npairs = 10\n")
    rc, out, _ = run(capsys, "verify", "--config", str(cfg))
    assert rc == (1 if json.loads(out)["summary"]["failures"] else 0)


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["phi-table", "--nope"],
    ["classic-bounds", "--system", "linear", "--f", "poly:0,0,1", "--x", "1", "--y", "0"],
    ["classic-bounds", "--system", "nosuch", "--f", "poly:0,0,1", "--x", "0", "--y", "1"],
    ["verify", "--config", "/nonexistent/suite.cfg"],
    ["upper-cor6b", "--f", "poly:0,0,1", "--error", "const:1"],
])
def test_error_exit_codes(capsys, argv):
    rc, _, err = run(capsys, *argv)
    assert rc == 2 and err


def test_verify_config_error_position(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("seed = 1\nsystems = linear; wobble\n")
    rc, _, err = run(capsys, "verify", "--config", str(cfg))
    assert rc == 2 and "line 2" in err
