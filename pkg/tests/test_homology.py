import random

import pytest
from hypothesis import given, settings, strategies as st

from segalpy.errors import IndexBeyondCap, NotSimplyConnected
from segalpy.homology import (HomologyGroup, SparseIntMatrix, Z, ZERO, chain_complex,
                              homology, homology_all, invariant_factors, pi2_simply_connected,
                              rank, relative_complex, smith_normal_form)
from segalpy.simplicial import sphere, standard_simplex

from conftest import load_fixture
from oracles import determinantal_factors, rational_betti, rational_rank
from strategies import simplicial_sets


def random_matrix(rng, rows=None, cols=None):
    rows = rng.randint(1, 5) if rows is None else rows
    cols = rng.randint(1, 5) if cols is None else cols
    density = rng.choice([0.2, 0.5, 0.9])
    return [[rng.randint(-6, 6) if rng.random() < density else 0 for _ in range(cols)]
            for _ in range(rows)]


MATRICES = [random_matrix(random.Random(seed)) for seed in range(200)]


@pytest.mark.parametrize("dense", MATRICES)
def test_snf_matches_determinantal_divisors(dense):
    M = SparseIntMatrix.from_dense(dense)
    assert invariant_factors(M) == determinantal_factors(dense)
    assert rank(M) == rational_rank(dense)


@pytest.mark.parametrize("dense", MATRICES[:60])
def test_snf_transforms_diagonalize(dense):
    M = SparseIntMatrix.from_dense(dense)
    factors, U, V = smith_normal_form(M, transforms=True)
    D = (U @ M @ V).to_dense()
    for i, row in enumerate(D):
        for j, v in enumerate(row):
            assert v == (factors[i] if i == j and i < len(factors) else 0)
    assert invariant_factors(SparseIntMatrix.from_dense(D)) == factors


@settings(max_examples=40)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=4))
def test_snf_is_idempotent_and_divisible(dense):
    f = invariant_factors(SparseIntMatrix.from_dense(dense))
    assert all(b % a == 0 for a, b in zip(f, f[1:]))
    diag = [[f[i] if i == j and i < len(f) else 0 for j in range(3)] for i in range(len(dense))]
    assert invariant_factors(SparseIntMatrix.from_dense(diag)) == f


def test_known_torsion():
    assert invariant_factors(SparseIntMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])) \
        == [2, 6, 12]


@given(simplicial_sets())
def test_boundary_squares_to_zero(X):
    cc = chain_complex(X)
    assert cc.d_squared_violations() == []


@given(simplicial_sets())
def test_euler_characteristic_and_rational_ranks(X):
    cc = chain_complex(X)
    hs = homology_all(X)
    assert [h.rank for h in hs] == rational_betti(X, X.cap - 1)
    for k in range(1, X.cap + 1):
        assert len(cc.factors(k)) == rational_rank(cc.boundaries[k].to_dense())


def test_euler_characteristic_of_sphere():
    assert chain_complex(sphere(2, 3)).euler_characteristic() == 2


def test_matrix_text_round_trip():
    M = SparseIntMatrix.from_dense(MATRICES[7])
    assert SparseIntMatrix.from_text(M.to_text()) == M


def test_group_json_and_str():
    g = HomologyGroup(2, (2, 4))
    assert HomologyGroup.from_json(g.to_json()) == g
    assert str(g) == "Z^2 + Z/2 + Z/4"
    assert str(ZERO) == "0"
    with pytest.raises(ValueError):
        HomologyGroup(0, (2, 3))


def test_homology_above_cap_raises():
    with pytest.raises(IndexBeyondCap):
        homology(sphere(2, 3), 3)


def test_relative_homology_of_simplex_rel_boundary():
    h = standard_simplex(2, 2)
    cc = relative_complex(h, [x for x in h.ids() if h.dim(x) < 2])
    assert [cc.homology(i) for i in range(2)] == [ZERO, ZERO]
    assert cc.ranks == [0, 0, 1]


def test_pi2():
    assert pi2_simply_connected(load_fixture("s2.json")) == Z
    assert pi2_simply_connected(load_fixture("wedge_s2.json")) == HomologyGroup(2)
    assert pi2_simply_connected(load_fixture("s3.json")) == ZERO
    with pytest.raises(NotSimplyConnected):
        pi2_simply_connected(load_fixture("torus.json"))
