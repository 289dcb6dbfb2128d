import pytest

from segalpy.arrange import StageTrace
from segalpy.errors import (BadBasepoint, InconsistentRun, NondegenerateEdges,
                            NotSimplyConnected, ResourceLimit)
from segalpy.homology import HomologyGroup, homology_all
from segalpy.pipeline import (PushoutRequest, check_run, hurewicz_checks, loop_homology,
                              loop_model, pi3_via_loops, svk_pushout)
from segalpy.simplicial import (SimplicialMap, point, product, pushout, sphere,
                                standard_simplex, subcomplex)

from conftest import load_fixture
from oracles import rational_betti


def groups(*ranks):
    return [HomologyGroup(r) for r in ranks]


def james_two(cap):
    """``S^2 x S^2`` with the two axes identified: the second James stage of ``S^2``."""
    S = sphere(2, cap)
    P, (p1, p2) = product(S, S)

    def at_base(f, x):
        return S.dim(f.assignment[x][1]) == 0

    axes = [x for x in P.ids() if at_base(p1, x) or at_base(p2, x)]
    L, incl = subcomplex(P, axes)
    fold = []
    for x in L.ids():
        y = incl.assignment[x][1]
        fold.append(p2.assignment[y] if at_base(p1, y) else p1.assignment[y])
    return pushout(SimplicialMap(L, S, fold), incl).space


@pytest.fixture(scope="module")
def s2_run():
    return loop_model(load_fixture("s2.json"), 2)


@pytest.fixture(scope="module")
def s3_run():
    return loop_model(load_fixture("s3.json"), 2)


def test_james_oracle_is_sound():
    J = james_two(5)
    assert rational_betti(J, 4) == [1, 0, 1, 0, 1]


def test_point():
    assert loop_homology(point(5), 2) == groups(1, 0, 0)


@pytest.mark.parametrize("n,expected", [(0, [1]), (1, [1, 1])])
def test_s2_small_n(n, expected):
    assert loop_homology(load_fixture("s2.json"), n) == groups(*expected)


def test_s2(s2_run):
    assert s2_run.loop_homology == groups(1, 1, 1)
    assert s2_run.supported_degree == 2
    assert check_run(s2_run.stages, s2_run.space, 2).passed


def test_stable_in_n(s2_run):
    assert loop_homology(load_fixture("s2.json"), 1) == s2_run.loop_homology[:2]


def test_s3_matches_james(s3_run):
    assert s3_run.loop_homology == homology_all(james_two(5), 2)


def test_pi3_of_s3():
    group, result, checks = pi3_via_loops(load_fixture("s3.json"))
    assert group == HomologyGroup(1)
    assert checks and all(c.agrees for c in checks)


def test_wedge_of_two_2_spheres():
    # the loop homology of a wedge of k simply connected spheres is the
    # tensor algebra on their desuspensions
    X = load_fixture("wedge_s2.json")
    r = loop_model(X, 2)
    assert r.loop_homology == groups(1, 2, 4)
    assert all(c.agrees for c in hurewicz_checks(X, r, simply_connected=True))


@pytest.mark.slow
def test_wedge_of_two_3_spheres():
    group, _, _ = pi3_via_loops(load_fixture("wedge_s3.json"))
    assert group == HomologyGroup(2)


def test_hurewicz_rejects_false_assertion(s2_run):
    with pytest.raises(NotSimplyConnected):
        hurewicz_checks(s2_run.space, s2_run, two_connected=True)


def test_check_run_catches_mutations(s2_run):
    stages = list(s2_run.stages)
    bad = StageTrace(stages[3].step, stages[3].cell_counts,
                     [HomologyGroup(1), HomologyGroup(1)] + stages[3].diag_homology[2:],
                     True, 1)
    v = check_run(stages[:3] + [bad] + stages[4:], s2_run.space, 2)
    assert not v.passed and v.failing_stage == 3
    shrunk = StageTrace(None, {pq: 0 for pq in stages[-1].cell_counts},
                        stages[-1].diag_homology, True, 1)
    v = check_run(stages + [shrunk], s2_run.space, 2)
    assert not v.passed and "dropped" in v.reasons[0]
    two = StageTrace(None, stages[0].cell_counts, stages[0].diag_homology, True, 2)
    assert not check_run([two], s2_run.space, 2).passed


def test_inconsistent_schedule_is_refused(monkeypatch):
    import segalpy.pipeline as pl

    def fake(stages, X, n):
        return pl.Verdict(False, 1, ["H_2(diagonal) = 0, expected Z"])
    monkeypatch.setattr(pl, "check_run", fake)
    with pytest.raises(InconsistentRun):
        loop_model(load_fixture("s2.json"), 1)


def test_input_conditions():
    with pytest.raises(BadBasepoint):
        loop_model(standard_simplex(1, 3), 1)
    with pytest.raises(NondegenerateEdges):
        loop_model(load_fixture("torus.json"), 1)
    with pytest.raises(ValueError):
        loop_model(point(3), -1)


def test_budget():
    with pytest.raises(ResourceLimit):
        loop_model(load_fixture("s2.json"), 2, budget=50)


def test_svk_with_point_legs_matches_direct(s2_run):
    S = load_fixture("s2.json")
    pt = point(S.cap)
    to_s = SimplicialMap(pt, S, [((0,), 0)])
    req = PushoutRequest(S, pt, pt, to_s, SimplicialMap.identity(pt), 2)
    assert svk_pushout(req).loop_homology == s2_run.loop_homology
