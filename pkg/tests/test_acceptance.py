"""The seven acceptance criteria; each prints a PASS or FAIL line at the end of the run."""

import contextlib
import json
import os
import subprocess
import sys
import time

import pytest
from hypothesis import given, strategies as st

from segalpy import io
from segalpy.arrange import apply_step, default_depths, default_schedule
from segalpy.bisimplicial import constant_precat, diagonal, diagonal_homology
from segalpy.cli import main
from segalpy.homology import HomologyGroup, homology_all, pi2_simply_connected
from segalpy.pipeline import check_run, loop_model, pi3_via_loops

from conftest import CRITERIA, fixture_path, load_fixture

Z = HomologyGroup(1)
HERE = os.path.dirname(os.path.abspath(__file__))


@contextlib.contextmanager
def criterion(number, title):
    CRITERIA[number] = (False, title)
    yield
    CRITERIA[number] = (True, title)


def test_criterion_1_loop_homology_of_s2(tmp_path, capsys):
    with criterion(1, "H_0, H_1, H_2 of the loop space of S^2 are Z, Z, Z"):
        report = tmp_path / "s2.json"
        code = main(["compute", "--input", fixture_path("s2.json"), "--n", "2",
                     "--report", str(report)])
        capsys.readouterr()
        assert code == 0
        rep = io.load(str(report))
        assert rep["cap"] == 4 and len(rep["schedule"]) == 12
        assert [HomologyGroup.from_json(g) for g in rep["loop_homology"]] == [Z, Z, Z]
        assert rep["verdict"] == "pass"


RUNS = [("point.json", 2), ("s2.json", 2), ("s3.json", 2), ("wedge_s2.json", 2)]


def test_criterion_2_realization_invariance():
    with criterion(2, "diagonal homology is constant and equals H(X) at every stage"):
        for name, n in RUNS:
            X = load_fixture(name)
            r = loop_model(X, n)
            expected = homology_all(X.recap(n + 2), n + 1)
            assert check_run(r.stages, r.space, n).passed
            for st_ in r.stages:
                assert st_.diag_homology[:n + 2] == expected
        # second route: the explicit diagonal, stage by stage, on a smaller run
        X = load_fixture("s2.json").recap(3)
        A = constant_precat(X, 3)
        want = homology_all(X, 2)
        for step, depth in zip(default_schedule(1), default_depths(1)):
            A = apply_step(A, step, depth=depth)
            assert homology_all(diagonal(A), 2) == want == diagonal_homology(A)


def test_criterion_3_hurewicz_on_s3():
    with criterion(3, "H_2 of the loop model of S^3 equals H_3(S^3) = Z"):
        X = load_fixture("s3.json")
        group, result, checks = pi3_via_loops(X, 2)
        assert group == Z
        assert homology_all(X, 3)[3] == Z
        assert [c.name for c in checks if c.agrees] == ["H_1(loop) = H_2(X)",
                                                         "H_2(loop) = H_3(X)"]
        assert len(result.schedule) == 12


def test_criterion_4_pi2():
    with criterion(4, "pi_2 by elimination: Z, Z^2, 0"):
        assert pi2_simply_connected(load_fixture("s2.json")) == Z
        assert pi2_simply_connected(load_fixture("wedge_s2.json")) == HomologyGroup(2)
        assert pi2_simply_connected(load_fixture("s3.json")) == HomologyGroup(0)


def test_criterion_5_pushout_consistency(tmp_path, capsys):
    with criterion(5, "loop homology of a pushout presentation of S^2 equals the direct run"):
        direct = tmp_path / "direct.json"
        via = tmp_path / "pushout.json"
        assert main(["compute", "--input", fixture_path("s2.json"), "--n", "2",
                     "--report", str(direct)]) == 0
        assert main(["pushout", "--input", fixture_path("s2_pushout.json"), "--n", "2",
                     "--report", str(via)]) == 0
        capsys.readouterr()
        a, b = io.load(str(direct)), io.load(str(via))
        assert b["verdict"] == "pass"
        assert a["loop_homology"] == b["loop_homology"]


@given(st.integers(0, 5))
def test_criterion_6_schedule_length(n):
    with criterion(6, "default schedule has (n+1)(n+2) < (n+2)^2 steps for n <= 5"):
        assert len(default_schedule(n)) == (n + 1) * (n + 2) < (n + 2) ** 2


PROPERTY_SUITES = [
    "test_simplicial.py::test_generated_sets_satisfy_simplicial_identities",
    "test_simplicial.py::test_shuffle_counts",
    "test_simplicial.py::test_product_counts_against_enumeration",
    "test_homology.py::test_snf_matches_determinantal_divisors",
    "test_simplicial.py::test_pushout_cardinality",
    "test_simplicial.py::test_mapping_cylinder_is_homology_equivalent",
]


def test_criterion_7_property_suites_standalone():
    with criterion(7, "property suites pass standalone in under five minutes"):
        start = time.monotonic()
        out = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider"]
                             + [os.path.join(HERE, s) for s in PROPERTY_SUITES],
                             capture_output=True, text=True, cwd=HERE, timeout=300)
        elapsed = time.monotonic() - start
        assert out.returncode == 0, out.stdout[-2000:]
        assert "passed" in out.stdout and "failed" not in out.stdout
        assert elapsed < 300
