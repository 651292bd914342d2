"""The oracles agree with each other and with their frozen values."""

from oracles import (colored_partitions, half_odd_partitions, partition_counts_by_product,
                     null_space, rank)

PARTITIONS = [1, 1, 2, 3, 5, 7]
THREE_COLORED = [1, 3, 9, 22]
HALF_ODD = [1, 1, 1, 2, 2, 3]


def test_partition_enumeration_frozen():
    assert [colored_partitions(n, 1) for n in range(6)] == PARTITIONS
    assert [colored_partitions(n, 3) for n in range(4)] == THREE_COLORED
    assert [half_odd_partitions(k) for k in range(6)] == HALF_ODD


def test_enumeration_matches_generating_function():
    for colors in (1, 2, 3):
        assert [colored_partitions(n, colors) for n in range(7)] == partition_counts_by_product(6, colors)


def test_dense_helpers():
    assert rank([{0: 1, 1: 2}, {0: 2, 1: 4}]) == 1
    ker = null_space(2, [{0: 1}, {0: -1}])
    assert ker == [{1: 1, 0: 1}]
