
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kmroots.cartan import (
    TypeTag,
    classify_type,
    gram_matrix,
    submatrix,
    symmetrize,
    validate,
)
from kmroots.errors import EmptySubset, MatrixTooLarge, NotGCM, NotSymmetrizable

from conftest import A1_AFF, A2, A2_AFF, HYP, RANK3, TWISTED


def test_validate_accepts_basic_matrices():
    for rows in (A2, A1_AFF, HYP):
        A = validate(rows)
        assert A.is_connected()
        assert A.rows() == rows


@pytest.mark.parametrize(
    "rows, reason",
    [
        ([[2, -1], [0, 2]], NotGCM.ZERO_SYMMETRY),
        ([[3, -1], [-1, 2]], NotGCM.DIAGONAL),
        ([[2, 1], [1, 2]], NotGCM.POSITIVE_OFF_DIAGONAL),
        ([[2, -1]], NotGCM.NOT_SQUARE),
        ([], NotGCM.NOT_SQUARE),
    ],
)
def test_validate_rejects(rows, reason):
    with pytest.raises(NotGCM) as exc:
        validate(rows)
    assert exc.value.reason == reason


def test_size_cap():
    rows = [[2 if i == j else 0 for j in range(5)] for i in range(5)]
    with pytest.raises(MatrixTooLarge):
        validate(rows, max_size=4)


def test_symmetrizer_examples():
    assert symmetrize(validate(A2)).q == (1, 1)
    assert symmetrize(validate([[2, -2], [-1, 2]])).q == (1, 2)
    assert symmetrize(validate(TWISTED)).q == (1, 2, 1)


def test_inconsistent_cycle_is_reported():
    rows = [[2, -1, -1], [-2, 2, -1], [-2, -2, 2]]
    with pytest.raises(NotSymmetrizable) as exc:
        symmetrize(validate(rows))
    err = exc.value
    assert sorted(err.cycle) == [0, 1, 2]
    assert err.lhs != err.rhs


def test_symmetrizer_per_component():
    rows = [[2, -2, 0, 0], [-1, 2, 0, 0], [0, 0, 2, -3], [0, 0, -1, 2]]
    q = symmetrize(validate(rows)).q
    assert q == (1, 2, 1, 3)


def test_classification_examples():
    assert [t.tag for t in classify_type(validate(A2))] == [TypeTag.FINITE]
    (aff,) = classify_type(validate(A1_AFF))
    assert aff.tag is TypeTag.AFFINE and aff.null_root == (1, 1)
    assert [t.tag for t in classify_type(validate(HYP))] == [TypeTag.INDEFINITE]
    assert classify_type(validate(A2_AFF))[0].null_root == (1, 1, 1)
    assert classify_type(validate(TWISTED))[0].null_root == (1, 1, 1)
    assert classify_type(validate(RANK3))[0].tag is TypeTag.INDEFINITE


def test_disconnected_classified_per_component():
    rows = [[2, -2, 0], [-2, 2, 0], [0, 0, 2]]
    types = classify_type(validate(rows))
    assert [(t.tag, t.component) for t in types] == [(TypeTag.AFFINE, (0, 1)), (TypeTag.FINITE, (2,))]
    assert types[0].null_root == (1, 1, 0)


def test_affine_null_root_in_kernel_and_proper_subdiagrams_finite():
    for rows in (A1_AFF, A2_AFF, TWISTED, [[2, -1, 0], [-2, 2, -2], [0, -1, 2]]):
        A = validate(rows)
        q = symmetrize(A)
        B = gram_matrix(A, q)
        (t,) = classify_type(A, q)
        assert t.tag is TypeTag.AFFINE
        assert all(sum(b * d for b, d in zip(row, t.null_root)) == 0 for row in B)
        for drop in A.index_set:
            sub = submatrix(A, [i for i in A.index_set if i != drop])
            assert all(s.tag is TypeTag.FINITE for s in classify_type(sub))


def test_submatrix():
    assert submatrix(validate(RANK3), [0, 1]).rows() == A1_AFF
    assert submatrix(validate(A2), [0, 1]).rows() == A2
    assert submatrix(validate(A2), [1]).rows() == [[2]]
    with pytest.raises(EmptySubset):
        submatrix(validate(A2), [])


@st.composite
def symmetric_gcms(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    rows = [[2] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a = -draw(st.integers(0, 3))
            rows[i][j] = rows[j][i] = a
    return rows


@st.composite
def symmetrizable_gcms(draw, max_n=4):
    # A = D^-1 S with S symmetric, made integral row by row.
    n = draw(st.integers(1, max_n))
    d = [draw(st.integers(1, 3)) for _ in range(n)]
    rows = [[2] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            s = -draw(st.integers(0, 2)) * d[i] * d[j]
            rows[i][j] = s // d[i]
            rows[j][i] = s // d[j]
    return rows


@settings(max_examples=200, deadline=None)
@given(symmetric_gcms())
def test_symmetric_matrices_get_unit_symmetrizer(rows):
    assert set(symmetrize(validate(rows)).q) == {1}


@settings(max_examples=200, deadline=None)
@given(symmetrizable_gcms())
def test_symmetrizer_symmetrizes(rows):
    A = validate(rows)
    q = symmetrize(A).q
    B = gram_matrix(A, symmetrize(A))
    assert all(B[i][j] == B[j][i] for i in A.index_set for j in A.index_set)
    assert all(v > 0 for v in q)
    for comp in A.components():
        assert min(q[i] for i in comp) >= 1
        g = 0
        for i in comp:
            from math import gcd

            g = gcd(g, q[i])
        assert g == 1


@settings(max_examples=200, deadline=None)
@given(symmetrizable_gcms())
def test_type_matches_eigenvalues(rows):
    A = validate(rows)
    B = np.array(gram_matrix(A, symmetrize(A)), dtype=float)
    for t in classify_type(A):
        idx = list(t.component)
        ev = np.linalg.eigvalsh(B[np.ix_(idx, idx)])
        if t.tag is TypeTag.FINITE:
            assert ev.min() > 1e-9
        elif t.tag is TypeTag.AFFINE:
            assert abs(ev.min()) < 1e-9 and np.sort(ev)[1] > 1e-9
        else:
            assert ev.min() < -1e-9 or np.sum(np.abs(ev) < 1e-9) > 1
