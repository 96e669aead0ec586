import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kmroots.cartan import submatrix, validate
from kmroots.errors import CorruptCache, HeightBoundExceeded, ZeroVector
from kmroots.lattice import RootVector, form
from kmroots.multiplicity import (
    MultiplicityTable,
    cache_load,
    cache_path,
    cache_store,
    compositions,
    enumerate_roots,
    load_or_build,
    loads,
)
from kmroots.weyl import RootKind, classify_root, reflect

from conftest import A1_AFF, A2, A2_AFF, HYP, RANK3, TWISTED, make_table
from oracles import serre_multiplicities

# Multiplicities of k(1,1) for the rank-2 hyperbolic matrix, k = 1..20.
HYP_DIAGONAL = [
    1, 1, 3, 6, 16, 39, 107, 288, 808, 2278,
    6559, 19022, 55853, 165173, 492420, 1476973, 4456255, 13511708, 41156761, 125869268,
]


@pytest.mark.parametrize(
    "rows, box",
    [
        (A2, (2, 2)),
        (A1_AFF, (4, 4)),
        (HYP, (5, 5)),
        (A2_AFF, (2, 2, 2)),
        (TWISTED, (2, 2, 2)),
        (RANK3, (3, 3, 1)),
        ([[2, -1, 0], [-2, 2, -2], [0, -1, 2]], (2, 3, 2)),
    ],
)
def test_agrees_with_serre_presentation(rows, box):
    table = make_table(rows, sum(box))
    for alpha, m in serre_multiplicities(rows, box).items():
        assert table.mult(alpha) == m, alpha


def test_simple_roots_and_small_examples(hyp, a2):
    for i in range(2):
        e = RootVector.simple(i, 2)
        assert hyp.mult(e) == 1 and hyp.c(e) == 1
    assert hyp.c((1, 1)) == 1
    assert a2.mult((1, 1)) == 1
    assert a2.mult((2, 1)) == 0 and a2.c((2, 1)) == 0


def test_degenerate_branch_is_resolved_by_reduction(a2):
    # (2,1) in A2 makes the recurrence factor vanish with a zero right-hand side.
    assert RootVector((2, 1)) in a2.degenerate
    for v in a2.degenerate:
        kind = classify_root(a2.cartan, a2.gram, v)
        assert a2.mult(v) == (1 if kind is RootKind.REAL else 0)


def test_hyperbolic_diagonal():
    t = make_table(HYP, 40)
    assert [t.mult((k, k)) for k in range(1, 21)] == HYP_DIAGONAL


def test_affine_imaginary_multiplicities(a2_aff, twisted):
    a1_aff = make_table(A1_AFF, 40)
    assert [a1_aff.mult((k, k)) for k in range(1, 21)] == [1] * 20
    assert [a2_aff.mult((k, k, k)) for k in range(1, 11)] == [2] * 10
    assert [twisted.mult((k, k, k)) for k in range(1, 11)] == [1, 2] * 5


def test_enumerate_roots():
    assert enumerate_roots(make_table(A2, 3), 3) == [((0, 1), 1), ((1, 0), 1), ((1, 1), 1)]
    roots = enumerate_roots(make_table(A1_AFF, 4), 4)
    assert [tuple(v) for v, _ in roots] == [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)]
    assert all(m == 1 for _, m in roots)
    assert enumerate_roots(make_table(HYP, 2), 2) == [((0, 1), 1), ((1, 0), 1), ((1, 1), 1)]


def test_queries_out_of_range(a2):
    with pytest.raises(HeightBoundExceeded):
        a2.mult((7, 7))
    with pytest.raises(ZeroVector):
        a2.mult((0, 0))
    assert a2.mult((1, -1)) == 0
    assert a2.mult((-1, -1)) == 1


def test_compositions():
    assert sorted(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert len(list(compositions(4, 3))) == 15


def test_c_is_divisor_sum(rank3):
    for beta, m, c in rank3.entries():
        total = Fraction(0)
        for k in range(1, max(beta) + 1):
            if all(b % k == 0 for b in beta):
                total += Fraction(rank3.mult(tuple(b // k for b in beta)), k)
        assert c == total


def test_disconnected_vectors_have_no_roots():
    t = make_table([[2, -1, 0], [-1, 2, 0], [0, 0, 2]], 6)
    assert t.mult((1, 0, 1)) == 0
    assert t.mult((1, 1, 1)) == 0


def test_submatrix_consistency(rank3):
    sub = MultiplicityTable(submatrix(rank3.cartan, [0, 1]), 20)
    for v, m, _ in sub.entries():
        assert rank3.mult((*v, 0)) == m


def test_weyl_invariance_and_sign(hyp, rank3):
    for t in (hyp, rank3):
        for v, m in t.positive_roots(10):
            assert t.mult(-v) == m
            for i in range(t.rank):
                w = reflect(t.cartan, i, v)
                if t.in_range(w) and w.sign.value != "mixed":
                    assert t.mult(w) == m


def test_max_bound_for_negative_pairs(hyp, rank3):
    for t in (hyp, rank3):
        roots = [v for v, _ in t.positive_roots(12)]
        roots += [-v for v in roots]
        for i, x in enumerate(roots):
            for y in roots[i + 1 :]:
                s = x + y
                if s.is_zero() or abs(s.height) > 12 or form(t.gram, x, y) >= 0:
                    continue
                assert t.mult(s) >= max(t.mult(x), t.mult(y))


def test_cache_round_trip(tmp_path):
    t = make_table(A2, 3)
    path = cache_store(t, tmp_path)
    assert path == cache_path(tmp_path, t.matrix_id)
    back = cache_load(t.matrix_id, tmp_path)
    assert back.entries() == t.entries()
    assert back.max_height == 3


def test_cache_wrong_id(tmp_path):
    t = make_table(A2, 3)
    cache_store(t, tmp_path)
    other = make_table(A1_AFF, 2)
    cache_path(tmp_path, t.matrix_id).rename(cache_path(tmp_path, other.matrix_id))
    with pytest.raises(CorruptCache):
        cache_load(other.matrix_id, tmp_path)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda lines: lines[:1] + ["0 1 2 2 1"] + lines[2:],  # wrong multiplicity
        lambda lines: lines[:1] + lines[2:3] + lines[1:2] + lines[3:],  # order
        lambda lines: ["{not json"] + lines[1:],
        lambda lines: lines[:1] + ["1 0 1"] + lines[2:],  # short line
    ],
)
def test_corrupt_cache_detected(tmp_path, mutate):
    t = make_table(A2, 3)
    path = cache_store(t, tmp_path)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(mutate(lines)) + "\n")
    with pytest.raises(CorruptCache):
        cache_load(t.matrix_id, tmp_path)


def test_header_hash_checked():
    t = make_table(A2, 3)
    lines = t.dumps().splitlines()
    header = json.loads(lines[0])
    header["matrix_hash"] = "0" * 64
    with pytest.raises(CorruptCache):
        loads("\n".join([json.dumps(header)] + lines[1:]))


def test_extend_keeps_lower_entries(tmp_path):
    A = validate(RANK3)
    low = load_or_build(A, 10, tmp_path)
    low_lines = low.dumps().splitlines()[1:]
    high = load_or_build(A, 20, tmp_path)
    assert high.max_height == 20
    high_lines = high.dumps().splitlines()[1:]
    assert high_lines[: len(low_lines)] == low_lines
    assert cache_load(high.matrix_id, tmp_path).entries() == high.entries()


def test_extension_matches_fresh_build():
    t = make_table(HYP, 6)
    t.extend(14)
    assert t.entries() == make_table(HYP, 14).entries()


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=9, max_size=9))
def test_engine_matches_weyl_on_random_gcms(off):
    # Random symmetric rank-3 GCMs: roots are exactly the vectors Weyl reduction accepts.
    a, b, c = (-x for x in off[:3])
    rows = [[2, a, b], [a, 2, c], [b, c, 2]]
    t = make_table(rows, 7)
    for v, m in t.positive_roots(7):
        assert classify_root(t.cartan, t.gram, v) is not RootKind.NOT_A_ROOT
        if classify_root(t.cartan, t.gram, v) is RootKind.REAL:
            assert m == 1
    for x in range(6):
        for y in range(6):
            for z in range(6):
                if 0 < x + y + z <= 7 and t.mult((x, y, z)) == 0:
                    assert classify_root(t.cartan, t.gram, (x, y, z)) is RootKind.NOT_A_ROOT
