from __future__ import annotations

import json
import subprocess
import sys

import pytest

from normone.cli import main, parse_config, UsageError


def run(*args):
    return main(list(args))


def test_field_info(capsys, tmp_path):
    assert run("field-info", "--field", "builtin:sqrt2", "--out", str(tmp_path)) == 0
    info = json.loads(capsys.readouterr().out)
    assert abs(info["units"]["regulator"] - 0.8814) < 1e-4
    assert json.loads((tmp_path / "field_info.json").read_text())["field"]["name"] == "sqrt2"


def test_field_info_errors(tmp_path, capsys):
    assert run("field-info", "--field", str(tmp_path / "missing.json")) == 2
    cfg = json.loads((__import__("importlib").resources.files("normone.data") / "cubic13.json").read_text())
    cfg["sigma_on_basis"] = [[1, 0, 0], [0, 0, 1], [0, 1, 0]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cfg))
    assert run("field-info", "--field", str(bad)) == 2
    assert "sigma_order" in capsys.readouterr().err


def test_enumerate_rows(tmp_path):
    assert run("enumerate", "--bounds", "0.5,1.5,8", "--out", str(tmp_path)) == 0
    rows = {r: (tmp_path / f"enumerate_r{r}.csv").read_bytes().decode().split("\n") for r in ("0.5", "1.5", "8")}
    assert len(rows["8"]) == 4 + 2 and len(rows["1.5"]) == 1 + 2 and len(rows["0.5"]) == 1 + 1
    assert rows["8"][0].startswith("h,coord_1,coord_2,t_1")
    assert b"\r" not in (tmp_path / "enumerate_r8.csv").read_bytes()


def test_weyl_csv(tmp_path):
    assert run("weyl", "--bounds", "8", "--k", "1", "--out", str(tmp_path)) == 0
    header, row, _ = (tmp_path / "weyl.csv").read_text().split("\n")
    assert header == "r,k_1,re_S,im_S,norm_mag,count"
    fields = row.split(",")
    assert abs(float(fields[4]) - 3.05528 / 4) < 1e-5 and fields[5] == "4"


def test_cubic_characters(tmp_path):
    assert run("weyl", "--field", "builtin:cubic13", "--bounds", "100", "--k", "1:0,0:1,1:1",
               "--out", str(tmp_path)) == 0
    lines = (tmp_path / "weyl.csv").read_text().split("\n")
    assert lines[0] == "r,k_1,k_2,re_S,im_S,norm_mag,count" and len(lines) == 5
    assert run("weyl", "--field", "builtin:cubic13", "--bounds", "100", "--k", "1") == 2


def test_lcheck(tmp_path, capsys):
    assert run("lcheck", "--s", "1") == 2
    assert run("lcheck", "--k", "0,1", "--cutoff", "1,2000", "--out", str(tmp_path)) == 0
    out = capsys.readouterr().out
    assert "insufficient cutoff" in out and "matches zeta(ds)" in out
    lines = (tmp_path / "lcheck.csv").read_text().split("\n")
    assert lines[0] == "k_1,s,X,re_value,im_value,tail,ratio" and len(lines) == 6
    summary = json.loads((tmp_path / "lcheck.json").read_text())
    assert all(c["verdict"] == "zeta(ds)" for c in summary["checks"])


def test_discrepancy_and_oracle(tmp_path):
    assert run("discrepancy", "--bounds", "100,1000", "--out", str(tmp_path)) == 0
    lines = (tmp_path / "discrepancy.csv").read_text().split("\n")
    assert lines[0] == "r,count,star_discrepancy,method" and lines[1].endswith("exact")
    assert run("discrepancy", "--field", "builtin:sqrt-1", "--bounds", "100") == 2
    assert run("oracle", "--field", "builtin:sqrt3", "--bounds", "8,60", "--box", "30") == 0


def test_resource_exit_code(capsys):
    assert run("enumerate", "--bounds", "1e6", "--max-box-points", "100") == 3
    assert "box volume" in capsys.readouterr().err


def test_usage_errors():
    assert run("bogus") == 1
    assert run("weyl", "--bounds", "1e4,1e3") == 1
    assert run("weyl", "--precision", "32") == 1
    assert run("weyl", "-b", "10") == 1
    with pytest.raises(UsageError):
        parse_config(["enumerate", "--k", "x"])


def test_precision_env(monkeypatch):
    monkeypatch.setenv("NORMONE_PRECISION_BITS", "320")
    assert parse_config(["field-info"]).precision == 320
    assert parse_config(["field-info", "--precision", "128"]).precision == 128


def test_csv_independent_of_workers(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("enumerate", "--bounds", "2000", "--workers", "1", "--out", str(a)) == 0
    assert run("enumerate", "--bounds", "2000", "--workers", "3", "--out", str(b)) == 0
    assert (a / "enumerate_r2000.csv").read_bytes() == (b / "enumerate_r2000.csv").read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "normone", "field-info", "--field", "builtin:sqrt5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and '"name": "sqrt5"' in proc.stdout


def test_accept_exit_codes(monkeypatch, tmp_path, capsys):
    import normone.acceptance as acc
    monkeypatch.setattr(acc, "CRITERIA", (acc.criterion_9,))
    assert run("accept", "--out", str(tmp_path)) == 0
    assert "[PASS]  9. collision probe" in capsys.readouterr().out
    assert (tmp_path / "acceptance.csv").read_text().startswith("criterion,name,result,detail\n")

    def broken():
        return acc.CriterionResult(99, "always fails", False, "deliberate")
    monkeypatch.setattr(acc, "CRITERIA", (acc.criterion_9, broken))
    assert run("accept") == 4
    assert "1/2 criteria passed" in capsys.readouterr().out
