import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gril import gf2
from gril.gf2 import Gf2Matrix, Gf2Vector


def vec(*idx):
    return Gf2Vector(idx)


def test_vector_support_sorted():
    v = Gf2Vector([5, 1, 3])
    assert v.support == (1, 3, 5)
    assert 3 in v and 2 not in v
    assert v.low() == 5


def test_vector_xor_cancels():
    assert (vec(1, 2) ^ vec(2, 3)) == vec(1, 3)
    assert (vec(1) ^ vec(1)).is_zero()


def test_rank_identity():
    assert gf2.rank(Gf2Matrix.identity(3)) == 3


def test_rank_zero_matrix():
    assert gf2.rank(Gf2Matrix.zero(4, 4)) == 0


def test_rank_duplicate_columns():
    m = Gf2Matrix(2, [vec(0, 1), vec(0, 1)])
    assert gf2.rank(m) == 1


def test_column_reduce_identity_unchanged():
    m = Gf2Matrix.identity(4)
    red, pivots = gf2.column_reduce(m)
    assert [c.bits for c in red.columns] == [c.bits for c in m.columns]
    assert pivots == [0, 1, 2, 3]


def test_column_reduce_duplicate_elimination():
    m = Gf2Matrix(2, [vec(0), vec(0)])
    red, pivots = gf2.column_reduce(m)
    assert red.columns[1].is_zero()
    assert pivots == [0, None]


def test_column_reduce_filled_triangle():
    # rows/cols: v1 v2 v3 e12 e13 e23 t, ordered by dimension
    cols = [vec(), vec(), vec(),
            vec(0, 1), vec(0, 2), vec(1, 2),
            vec(3, 4, 5)]
    m = Gf2Matrix(7, cols)
    _, pivots = gf2.column_reduce(m)
    edge_pivots = [p for p in pivots[3:6] if p is not None]
    assert len(edge_pivots) == 2
    assert pivots[6] is not None


def test_in_span_trivial():
    assert gf2.in_span([vec(1)], vec(1)) == {0}
    assert gf2.in_span([vec(1)], vec(2)) is None


def test_in_span_forced_combination():
    basis = [vec(1) ^ vec(2), vec(2) ^ vec(3)]
    assert gf2.in_span(basis, vec(1) ^ vec(3)) == {0, 1}


@st.composite
def random_matrix(draw):
    nrows = draw(st.integers(1, 64))
    ncols = draw(st.integers(1, 64))
    cols = []
    for _ in range(ncols):
        bits = draw(st.integers(0, (1 << nrows) - 1))
        cols.append(Gf2Vector.from_bits(bits))
    return Gf2Matrix(nrows, cols)


@given(random_matrix())
@settings(max_examples=60, deadline=None)
def test_rank_equals_rank_of_transpose(m):
    assert gf2.rank(m) == gf2.rank(m.transpose())


@given(random_matrix())
@settings(max_examples=60, deadline=None)
def test_pivot_count_equals_rank(m):
    _, pivots = gf2.column_reduce(m)
    assert sum(1 for p in pivots if p is not None) == gf2.rank(m)


@given(random_matrix(), st.integers(0, 2 ** 20))
@settings(max_examples=60, deadline=None)
def test_in_span_combination_is_exact(m, seed):
    rng = np.random.default_rng(seed)
    picks = [j for j in range(m.ncols) if rng.random() < 0.5]
    target = Gf2Vector()
    for j in picks:
        target = target ^ m.columns[j]
    combo = gf2.in_span(m.columns, target)
    assert combo is not None
    acc = Gf2Vector()
    for j in combo:
        acc = acc ^ m.columns[j]
    assert acc == target


@given(random_matrix())
@settings(max_examples=40, deadline=None)
def test_kernel_vectors_annihilate(m):
    for k in gf2.kernel_basis(m):
        assert gf2.matvec(m, k).is_zero()
    assert len(gf2.kernel_basis(m)) == m.ncols - gf2.rank(m)


def test_row_index_out_of_range_rejected():
    with pytest.raises(ValueError):
        Gf2Matrix(2, [vec(2)])
