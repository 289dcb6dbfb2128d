from math import comb

import pytest
from hypothesis import given, strategies as st

from segalpy.arrange import (ArrangeStep, Schedule, arr, arr0only, arr1only, arranged_status,
                             attachment_index, default_depths, default_schedule, invert_all,
                             invertible_nerve, run_schedule, tau_leq1)
from segalpy.bisimplicial import column, constant_precat, diagonal_homology, validate
from segalpy.errors import CapExceeded
from segalpy.homology import homology_all
from segalpy.simplicial import isomorphic, point, sphere

from strategies import one_vertex_sets


@pytest.fixture(scope="module")
def s2_precat():
    return constant_precat(sphere(2, 3), 3)


@given(st.integers(0, 4), st.integers(2, 5))
def test_attachment_index_count(p, m):
    # monotone [p] -> [m], minus those inside one of the m principal edges;
    # neighbouring edges share the constant map at their common vertex
    expected = comb(m + p + 1, p + 1) - m * (p + 2) + (m - 1)
    assert len(attachment_index(p, m)) == expected


def test_attachment_index_examples():
    assert attachment_index(0, 3) == []
    assert attachment_index(1, 2) == [(0, 2)]
    assert set(attachment_index(1, 3)) == {(0, 2), (0, 3), (1, 3)}


@given(st.integers(0, 3), st.integers(2, 4))
def test_attachment_index_grows_with_m(p, m):
    assert set(attachment_index(p, m)) <= set(attachment_index(p, m + 1))


@given(st.integers(0, 5))
def test_default_schedule_length(n):
    s = default_schedule(n)
    assert len(s) == (n + 1) * (n + 2) < (n + 2) ** 2
    assert len(default_depths(n)) == len(s)
    assert all(step.kind == "Arr" and 2 <= step.m <= n + 2 for step in s)


def test_default_depths_small():
    assert default_depths(0) == [0, 1]
    assert default_depths(1) == [0, 0, 1, -1, 2, -1]


def test_step_validation_and_json():
    with pytest.raises(ValueError):
        ArrangeStep("Arr", 1)
    with pytest.raises(ValueError):
        ArrangeStep("Invert", 2)
    with pytest.raises(ValueError):
        ArrangeStep("Glue", 2)
    s = Schedule(1, (ArrangeStep("Arr", 2), ArrangeStep("Invert")))
    assert Schedule.from_json(1, s.to_json()) == s


def test_arr_on_point_does_nothing():
    A = constant_precat(point(3), 3)
    B = arr(A, 2)
    assert B.counts() == A.counts()


def test_negative_depth_leaves_precat(s2_precat):
    assert arr(s2_precat, 2, depth=-1).counts() == s2_precat.counts()


@pytest.mark.parametrize("depth", [0, 1, 2, None])
def test_arr_preserves_realization(s2_precat, depth):
    B = arr(s2_precat, 2, depth=depth)
    assert validate(B) == []
    assert B.is_globular() and len(B.objects()) == 1
    assert diagonal_homology(B) == diagonal_homology(s2_precat)
    for (p, q), c in s2_precat.counts().items():
        assert B.counts().get((p, q), 0) >= c


def test_arr_arranges_degree_two(s2_precat):
    before = arranged_status(s2_precat, 2, 0)
    assert not before.arranged and before.exact
    B = arr(s2_precat, 2)
    assert arranged_status(B, 2, 0).arranged
    assert arranged_status(B, 1, 3).arranged
    col = column(B, 1)
    assert col.counts()[:2] == [1, 1]
    assert [str(h) for h in homology_all(col, 1)] == ["Z", "Z"]


def test_arranged_status_above_cap(s2_precat):
    with pytest.raises(CapExceeded):
        arranged_status(s2_precat, 4, 0)


@pytest.mark.parametrize("full", [False, True])
def test_cylinder_variants_agree_on_loop_column(full):
    A = constant_precat(sphere(2, 3), 3)
    B = arr(A, 2, cylinder="full" if full else "relative")
    assert homology_all(column(B, 1), 1) == homology_all(column(arr(A, 2), 1), 1)


def test_arr0only_and_arr1only(s2_precat):
    B0 = arr0only(s2_precat, 2)
    assert diagonal_homology(B0) == diagonal_homology(s2_precat)
    B1 = arr1only(s2_precat, 2)
    assert validate(B1) == []
    assert diagonal_homology(B1) == diagonal_homology(s2_precat)
    assert arranged_status(B1, 2, 0).arranged


def test_tau_of_arr0only_is_tau_of_arr(s2_precat):
    # both only touch the components of A_{2/}, which is what tau sees
    t0 = tau_leq1(arr1only(s2_precat, 2))
    t = tau_leq1(arr(s2_precat, 2))
    assert t0.counts() == t.counts()


@given(one_vertex_sets(cap=3))
def test_tau_of_constant_precat(X):
    assert isomorphic(tau_leq1(constant_precat(X, 3)), X)


def test_invertible_nerve():
    N = invertible_nerve(4)
    assert N.counts() == [2, 2, 2, 2, 2]
    assert [str(h) for h in homology_all(N)] == ["Z", "0", "0", "0"]


def test_invert_all_preserves_realization(s2_precat):
    B = invert_all(arr(s2_precat, 2, depth=1))
    assert B.is_globular()
    assert diagonal_homology(B) == diagonal_homology(s2_precat)


def test_run_schedule_traces(s2_precat):
    sched = Schedule(1, (ArrangeStep("Arr", 2), ArrangeStep("Arr0Only", 2),
                         ArrangeStep("Arr1Only", 3)))
    B, traces = run_schedule(s2_precat, sched, depths=[1, None, None])
    assert len(traces) == 4
    assert traces[0].step is None
    assert all(t.diag_homology == traces[0].diag_homology for t in traces)
    with pytest.raises(ValueError):
        run_schedule(s2_precat, sched, depths=[1])
