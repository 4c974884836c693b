from __future__ import annotations

import csv
import io
import json
import math

import numpy as np
import pytest

from ghz4.cli import EXIT_FAIL, EXIT_OK, EXIT_SOLVER, EXIT_USAGE, run, to_json17
from ghz4.region import Hull, SurfaceGrid, read_obj
from ghz4.symstate import alphas_from_yz, pure_state_to_json, vertex_states

from conftest import yz_of


def test_state_human_and_json(capsys):
    assert run(["state", "--alphas", "0.5,0,0", "--beta", "0.5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "physical   True" in out and "sha256[:16]=" in out
    assert run(["state", "--alphas", "0.5,0,0", "--beta", "0.5", "--json"]) == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert d["point"]["y"] == pytest.approx(math.sqrt(7 / 32), abs=1e-15)
    assert d["physical"] and d["density"]["purity"] == pytest.approx(1.0)


def test_state_reports_violations(capsys):
    assert run(["state", "--alphas", "0.5,0,0", "--beta", "0.6"]) == EXIT_OK
    assert "violated" in capsys.readouterr().out


def test_state_bad_alphas(capsys):
    assert run(["state", "--alphas", "0.5,0", "--beta", "0"]) == EXIT_USAGE
    assert "--alphas" in capsys.readouterr().err


def test_twirl_ghz_file(tmp_path, capsys):
    f = tmp_path / "ghz.json"
    f.write_text(json.dumps(pure_state_to_json(vertex_states()["P1"])))
    assert run(["twirl", "--in", str(f)]) == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    p = d["point"]
    assert abs(p["x"] - 0.5) < 1e-12 and abs(p["y"] - math.sqrt(7 / 32)) < 1e-12
    assert abs(p["z"]) < 1e-12


def test_twirl_malformed_files(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["twirl", "--in", str(bad)]) == EXIT_USAGE
    short = tmp_path / "short.json"
    short.write_text(json.dumps([[1, 0]] * 3))
    assert run(["twirl", "--in", str(short)]) == EXIT_USAGE
    unnorm = tmp_path / "unnorm.json"
    unnorm.write_text(json.dumps({"psi": [[1, 0]] * 16}))
    assert run(["twirl", "--in", str(unnorm)]) == EXIT_USAGE
    assert run(["twirl", "--in", str(unnorm), "--normalize"]) == EXIT_OK
    assert run(["twirl", "--in", str(tmp_path / "missing.json")]) == EXIT_USAGE


def test_boundary_la2b2_csv(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert run(["boundary", "--class", "la2b2", "--grid", "8", "--out", str(out)]) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 36
    for r in rows:
        a3 = alphas_from_yz(float(r["y"]), float(r["z"]))[2]
        assert abs(float(r["x_max"]) - 3 * a3) < 1e-12
    g = SurfaceGrid.from_csv(out.read_text(), "la2b2", 8)
    assert len(g.samples) == 36


def test_boundary_to_stdout(capsys):
    assert run(["boundary", "--class", "la4", "--grid", "3"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("y,z,x_max,x_effective,empty")


def test_boundary_rejects_open_classes(capsys):
    assert run(["boundary", "--class", "lab3", "--grid", "4"]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "lab3" in err and "unanalyzed" in err
    assert run(["boundary", "--class", "nope", "--grid", "4"]) == EXIT_USAGE
    assert run(["boundary", "--class", "la4", "--grid", "1"]) == EXIT_USAGE


def test_oracle_prints_comparison(capsys):
    y, z = yz_of(1 / 16, 1 / 16)
    argv = ["oracle", "--class", "la4", "--y", repr(y), "--z", repr(z), "--restarts", "4",
            "--seed", "0"]
    assert run(argv) == EXIT_OK
    first = capsys.readouterr().out
    d = json.loads(first)
    assert d["status"] == "ok" and abs(d["x_best"] - 1 / 16) < 1e-3
    assert abs(d["analytic"]["x_max"] - 1 / 16) < 1e-12
    assert run(argv) == EXIT_OK
    assert capsys.readouterr().out == first


def test_oracle_open_class_needs_flag(capsys):
    y, z = yz_of(0.2, 0.05)
    base = ["oracle", "--class", "l053", "--y", str(y), "--z", str(z), "--restarts", "1"]
    assert run(base) == EXIT_USAGE
    assert run(base + ["--exploratory"]) in (EXIT_OK, EXIT_SOLVER)
    assert "estimate only" in capsys.readouterr().out


def test_oracle_outside_triangle(capsys):
    assert run(["oracle", "--class", "la4", "--y", "1", "--z", "1"]) == EXIT_USAGE


def test_hull_writes_obj_and_json(tmp_path, capsys):
    out = tmp_path / "h.obj"
    assert run(["hull", "--class", "la4", "--grid", "12", "--out", str(out)]) == EXIT_OK
    V, F = read_obj(out.read_text())
    h = Hull.from_json(json.loads((tmp_path / "h.json").read_text()))
    assert np.allclose(V, h.vertices) and len(F) == len(h.faces)
    for line in out.read_text().splitlines():
        assert line.split()[0] in ("v", "f")


def test_hierarchy_exit_codes(capsys):
    assert run(["hierarchy", "--inner", "labc2", "--outer", "la4", "--grid", "40",
                "--tol", "1e-9"]) == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert d["max_violation"] <= 1e-9
    assert run(["hierarchy", "--inner", "la2o31", "--outer", "la2b2", "--grid", "20",
                "--tol", "1e-9"]) == EXIT_FAIL
    assert run(["hierarchy", "--inner", "l071", "--outer", "la4"]) == EXIT_USAGE
    assert run(["hierarchy", "--inner", "la4", "--outer", "la2b2", "--tol", "-1"]) == EXIT_USAGE


def test_verify_subset(capsys):
    assert run(["verify", "--only", "1,2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 2 and "2/2 criteria passed" in out
    assert run(["verify", "--only", "x"]) == EXIT_USAGE


def test_usage_errors():
    assert run([]) == EXIT_USAGE
    assert run(["frobnicate"]) == EXIT_USAGE


def test_json17_precision():
    v = 0.1 + 0.2
    assert to_json17({"v": v}).count("0.30000000000000004") == 1
    assert json.loads(to_json17([1 / 3]))[0] == 1 / 3
    assert "Infinity" in to_json17({"a": math.inf})
