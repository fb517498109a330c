import pytest
from hypothesis import given, strategies as st

from macloc.partitions import (
    Cell,
    Partition,
    add_rect,
    arm,
    coarm,
    coleg,
    dominance_less,
    leg,
    partitions_of,
    zee,
)


def stats(mu, s):
    return arm(mu, s), leg(mu, s), coarm(mu, s), coleg(mu, s)


def test_cell_statistics():
    assert stats((2, 1), Cell(1, 1)) == (1, 1, 0, 0)
    assert stats((2, 1), Cell(1, 2)) == (0, 0, 1, 0)
    assert stats((3, 3, 1), Cell(2, 2)) == (1, 0, 1, 1)


def test_cell_outside_diagram():
    with pytest.raises(ValueError):
        arm((2, 1), Cell(2, 2))


def test_dominance_examples():
    assert dominance_less((1, 1), (2,))
    assert not dominance_less((2,), (1, 1))
    assert dominance_less((2, 2), (3, 1))
    with pytest.raises(ValueError):
        dominance_less((1,), (2,))


def test_add_rect_examples():
    assert add_rect((1,), 2, 2) == Partition((3, 2))
    assert add_rect((), 1, 3) == Partition((1, 1, 1))
    assert add_rect((2, 1), 0, 2) == Partition((2, 1))
    with pytest.raises(ValueError):
        add_rect((1, 1, 1), 1, 2)


def test_zee_examples():
    assert zee((1, 1)) == 2
    assert zee((2,)) == 2
    assert zee((2, 1, 1)) == 4


def test_normalization_and_parse():
    assert Partition((2, 1, 0, 0)) == Partition((2, 1))
    assert Partition.parse("2,1") == Partition((2, 1))
    assert Partition.parse("") == Partition()
    assert Partition((2, 1)).as_tuple(4) == (2, 1, 0, 0)
    with pytest.raises(ValueError):
        Partition((1, 2))


def test_partition_counts():
    assert [len(partitions_of(k)) for k in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]


sizes = st.integers(1, 8)


@given(sizes, st.data())
def test_arm_coarm_leg_coleg_sum_to_row_and_column(k, data):
    mu = data.draw(st.sampled_from(partitions_of(k)))
    conj = mu.conjugate()
    for s in mu.cells():
        assert mu.arm(s) + mu.coarm(s) + 1 == mu[s.row - 1]
        assert mu.leg(s) + mu.coleg(s) + 1 == conj[s.col - 1]


@given(sizes)
def test_dominance_is_strict_partial_order(k):
    ps = partitions_of(k)
    for a in ps:
        assert not dominance_less(a, a)
        for b in ps:
            for c in ps:
                if dominance_less(a, b) and dominance_less(b, c):
                    assert dominance_less(a, c)


@given(st.integers(0, 4), st.integers(0, 3), st.integers(0, 3), st.integers(1, 4))
def test_add_rect_composes(k, m1, m2, n):
    for mu in partitions_of(k):
        if len(mu) > n:
            continue
        assert add_rect(add_rect(mu, m1, n), m2, n) == add_rect(mu, m1 + m2, n)
