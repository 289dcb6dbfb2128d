import json
import os
import subprocess
import sys

import pytest

from segalpy import io
from segalpy.cli import main

from conftest import fixture_path

S2 = fixture_path("s2.json")


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


@pytest.fixture(scope="module")
def s2_report(tmp_path_factory):
    path = tmp_path_factory.mktemp("r") / "s2.json"
    assert main(["compute", "--input", S2, "--n", "2", "--report", str(path),
                 "--assert-simply-connected"]) == 0
    return path


def test_compute_report(s2_report):
    rep = io.load(str(s2_report))
    assert rep["verdict"] == "pass"
    assert rep["loop_homology"] == [{"rank": 1, "torsion": []}] * 3
    assert rep["unverified_degrees"] == []
    assert rep["input"] == io.fingerprint(io.load(S2))
    assert len(rep["schedule"]) == 12
    assert rep["cross_checks"][0]["agrees"]


def test_compute_is_deterministic(s2_report, tmp_path):
    again = tmp_path / "again.json"
    assert main(["compute", "--input", S2, "--n", "2", "--report", str(again),
                 "--assert-simply-connected"]) == 0
    assert again.read_bytes() == s2_report.read_bytes()


def test_check(capsys, s2_report):
    code, out = run(capsys, "check", "--report", str(s2_report), "--input", S2)
    assert code == 0 and json.loads(out.out)["consistent"]


def test_check_detects_tampering(capsys, s2_report, tmp_path):
    rep = io.load(str(s2_report))
    rep["stages"][2]["diag_homology"][2] = {"rank": 0, "torsion": []}
    bad = tmp_path / "bad.json"
    bad.write_text(io.dumps(rep))
    code, out = run(capsys, "check", "--report", str(bad), "--input", S2, "--no-recompute")
    assert code == 3
    assert "stage 2" in json.loads(out.out)["problems"][0]


def test_check_detects_other_input(capsys, s2_report):
    code, out = run(capsys, "check", "--report", str(s2_report), "--input",
                    fixture_path("s3.json"), "--no-recompute")
    assert code == 3


def test_check_malformed_report(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(io.dumps({"verdict": "pass", "n": 1, "stages": [{}], "schedule": []}))
    code, _ = run(capsys, "check", "--report", str(bad), "--input", S2)
    assert code == 2


def test_invalid_input_exit_2(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out = run(capsys, "compute", "--input", fixture_path("torus.json"), "--n", "1",
                    "--report", str(report))
    assert code == 2
    assert json.loads(out.out)["error"]["type"] == "NondegenerateEdges"
    assert not report.exists()


def test_parse_error_exit_2(capsys, tmp_path):
    bad = tmp_path / "x.json"
    bad.write_text("{\n  \"cap\": ")
    code, out = run(capsys, "homology", "--input", str(bad))
    assert code == 2 and "line" in json.loads(out.out)["error"]["message"]


def test_usage_error_exit_2(capsys):
    assert run(capsys, "compute", "--n", "2")[0] == 2
    assert run(capsys, "compute", "--input", S2, "--n", "-1")[0] == 2


def test_false_assertion_exit_3(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out = run(capsys, "compute", "--input", S2, "--n", "2", "--report", str(report),
                    "--assert-2-connected")
    assert code == 3
    assert json.loads(out.out)["error"]["type"] == "NotSimplyConnected"
    assert not report.exists()


def test_budget_exit_4(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out = run(capsys, "compute", "--input", S2, "--n", "2", "--budget", "40",
                    "--report", str(report))
    assert code == 4
    assert json.loads(out.out)["error"]["type"] == "ResourceLimit"
    assert not report.exists()


def test_homology(capsys):
    code, out = run(capsys, "homology", "--input", fixture_path("torus.json"))
    assert code == 0
    assert [g["rank"] for g in json.loads(out.out)["homology"]] == [1, 2, 1, 0]
    assert run(capsys, "homology", "--input", S2, "--upto", "7")[0] == 2


def test_info_warns_below_cap(capsys):
    code, out = run(capsys, "info", "--input", S2, "--n", "2", "--cap", "3")
    doc = json.loads(out.out)
    assert code == 0 and doc["warnings"] and "warning" in out.err
    assert doc["dims"] == [1, 0, 1] and doc["schedule_length"] == 12


def test_custom_schedule(capsys, tmp_path):
    sched = tmp_path / "sched.json"
    sched.write_text(json.dumps([{"kind": "Arr", "m": 2, "depth": 1},
                                 {"kind": "Arr", "m": 2, "depth": 2}]))
    code, out = run(capsys, "compute", "--input", S2, "--n", "1", "--schedule", str(sched))
    rep = json.loads(out.out)
    assert code == 0 and [s["depth"] for s in rep["schedule"]] == [1, 2]
    assert [g["rank"] for g in rep["loop_homology"]] == [1, 1]


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "segalpy.cli", "info", "--input", S2],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert json.loads(out.stdout)["vertices"] == 1


def test_point_n3(capsys):
    code, out = run(capsys, "compute", "--input", fixture_path("point.json"), "--n", "3")
    assert code == 0
    assert [g["rank"] for g in json.loads(out.out)["loop_homology"]] == [1, 0, 0, 0]
