from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diginv.oracles import count_standard_tableaux
from diginv.posets import (
    GradedGraph, add_box_covers, alpha_closed, chain, commutator, down_matrix, is_partition,
    is_r_differential, parse_graded_graph, partitions, path_count_between, path_count_e,
    path_counts_from_minimum, product_graded_graph, serialize_graded_graph, up_matrix, young_lattice,
    young_power,
)
from diginv.linalg import Matrix

Y = young_lattice(10)
PARTITION_NUMBERS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def _convolve(a, b):
    return [sum(a[k] * b[n - k] for k in range(n + 1)) for n in range(min(len(a), len(b)))]


def test_young_examples():
    assert young_lattice(6).level_sizes[:7] == (1, 1, 2, 3, 5, 7, 11)
    assert Y.levels[2] == ((1, 1), (2,))
    assert Y.up_covers(1, 0) == [(0, 1), (1, 1)]
    edges_3_to_4 = sum(m for (n, _, _), m in Y.edges.items() if n == 3)
    assert edges_3_to_4 == 7 == sum(len(add_box_covers(p)) for p in partitions(3))


def test_young_level_sizes():
    assert list(Y.level_sizes) == PARTITION_NUMBERS
    assert all(is_partition(p) for lv in Y.levels for p in lv)


def test_product_examples():
    y2 = young_power(2, 4)
    assert y2.level_sizes == (1, 2, 5, 10, 20)
    assert list(y2.level_sizes) == _convolve(PARTITION_NUMBERS, PARTITION_NUMBERS)[:5]
    yc = product_graded_graph(young_lattice(4), chain(4), 4)
    assert yc.level_sizes == (1, 2, 4, 7, 12)
    trivial = product_graded_graph(young_lattice(4), chain(0), 4)
    assert trivial.level_sizes == young_lattice(4).level_sizes
    assert len(trivial.edges) == len(young_lattice(4).edges)


def test_operator_examples():
    assert up_matrix(Y, 1).tolist() == [[1], [1]]
    assert commutator(Y, 1) == Matrix.identity(1)
    for n in range(1, 10):
        assert down_matrix(Y, n) == up_matrix(Y, n - 1).T
    with pytest.raises(ValueError):
        up_matrix(Y, 10)
    assert down_matrix(Y, 0).shape == (0, 1)
    with pytest.raises(ValueError):
        down_matrix(Y, 11)


def test_differential_examples():
    rep = is_r_differential(Y, 1, 9)
    assert rep.passed and rep.levels_checked == 10
    assert is_r_differential(young_power(2, 6), 2, 5).passed
    assert not is_r_differential(Y, 2, 3).passed
    mutant = young_lattice(5).without_edge(2, 0, 0)
    bad = is_r_differential(mutant, 1, 4)
    assert not bad.passed and bad.first_violation["level"] in (2, 3)
    with pytest.raises(ValueError, match="too shallow"):
        is_r_differential(young_lattice(4), 1, 4)


def test_path_count_examples():
    assert path_count_e(Y, (2, 1)) == 2
    assert tuple(path_count_e(Y, p) for p in Y.levels[4]) == (1, 3, 2, 3, 1)
    assert path_count_e(Y, ()) == 1
    assert path_count_between(Y, (1,), (2, 1)) == 2
    assert path_count_between(Y, (2,), (2, 1)) == 1
    with pytest.raises(ValueError, match="incomparable"):
        path_count_between(Y, (1, 1, 1), (3,))
    with pytest.raises(ValueError):
        path_count_between(Y, (2,), (1,))


def test_alpha_examples():
    assert alpha_closed(Y, 3, r=1) == 6
    assert alpha_closed(Y, 5, r=1) == 120
    assert alpha_closed(young_power(2, 4), 3, r=2) == 48
    with pytest.raises(ValueError):
        alpha_closed(Y, 11)


@pytest.mark.parametrize("n", range(9))
def test_alpha_is_factorial(n):
    assert alpha_closed(Y, n, r=1) == factorial(n)


@pytest.mark.parametrize("n", range(6))
def test_young_square_alpha(n):
    assert alpha_closed(young_power(2, 6), n, r=2) == 2 ** n * factorial(n)


def test_e_values_match_hook_lengths():
    counts = path_counts_from_minimum(Y)
    for n, lv in enumerate(Y.levels):
        for i, p in enumerate(lv):
            assert counts[n][i] == count_standard_tableaux(p)


def test_level_sizes_of_powers():
    p = PARTITION_NUMBERS[:6]
    y3 = young_power(3, 5)
    assert list(y3.level_sizes) == _convolve(_convolve(p, p), p)
    assert is_r_differential(y3, 3, 4).passed


def test_serialization_roundtrip():
    g = young_power(2, 3)
    assert parse_graded_graph(serialize_graded_graph(g)) == g
    assert parse_graded_graph(serialize_graded_graph(Y)) == Y
    with pytest.raises(ValueError):
        parse_graded_graph("L []\n")


def test_graded_graph_validation():
    with pytest.raises(ValueError):
        GradedGraph(((0, 1),), {})
    with pytest.raises(ValueError):
        GradedGraph(((0,), (1,)), {(1, 0, 0): 1})
    with pytest.raises(ValueError):
        GradedGraph(((0,), (2, 1)), {})


@st.composite
def random_graded_graphs(draw):
    sizes = [1] + draw(st.lists(st.integers(1, 3), min_size=1, max_size=4))
    levels = tuple(tuple((n, i) for i in range(s)) for n, s in enumerate(sizes))
    edges = {}
    for n in range(len(sizes) - 1):
        for i in range(sizes[n]):
            for j in range(sizes[n + 1]):
                m = draw(st.integers(0, 2))
                if m:
                    edges[(n, i, j)] = m
    return GradedGraph(levels, edges)


@settings(max_examples=150, deadline=None)
@given(random_graded_graphs())
def test_alpha_is_sum_of_squares_in_general(g):
    counts = path_counts_from_minimum(g)
    for n in range(g.max_level + 1):
        assert alpha_closed(g, n) == sum(c * c for c in counts[n])
    for n in range(1, g.max_level + 1):
        assert down_matrix(g, n) == up_matrix(g, n - 1).T
    assert parse_graded_graph(serialize_graded_graph(g)) == g
