import random
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diginv.catalog import random_01_matrix
from diginv.linalg import PowerSeries, series_inverse
from diginv.oracles import cycle_type_periodic_points, permutation_periodic_points
from diginv.zeta import (
    artin_mazur_series, parse_int_matrix, periodic_point_counts, zeta_rational_form, zeta_report,
)

SWAP = [[0, 1], [1, 0]]


def test_periodic_count_examples():
    assert periodic_point_counts([[2]], 6) == [2, 4, 8, 16, 32, 64]
    assert periodic_point_counts(SWAP, 4) == [0, 2, 0, 2]
    assert periodic_point_counts([[0, 0], [0, 0]], 3) == [0, 0, 0]


@pytest.mark.parametrize("bad", [[[1, 2]], [[-1]], [[1, 0], [0, 0.5]]])
def test_bad_matrices(bad):
    with pytest.raises(ValueError):
        periodic_point_counts(bad, 3)


def test_series_examples():
    assert artin_mazur_series([[2]], 4).coeffs == (1, 2, 4, 8, 16)
    assert artin_mazur_series(SWAP, 4).coeffs == (1, 0, 1, 0, 1)
    assert artin_mazur_series([[0]], 4).coeffs == (1, 0, 0, 0, 0)


def test_rational_form_examples():
    assert zeta_rational_form([[2]]).denominator == (1, -2)
    assert zeta_rational_form(SWAP).denominator == (1, 0, -1)
    assert zeta_rational_form([[1, 0], [0, 1]]).denominator == (1, -2, 1)
    assert str(zeta_rational_form([[1, 1], [1, 0]])) == "1 / (1 - t - t^2)"
    assert zeta_rational_form([[0]]).denominator == (1,)


def test_report_and_full_shift():
    rep = zeta_report([[2]], 12)
    assert rep.periodic_counts == [2 ** n for n in range(1, 13)]
    assert rep.series_from_exp.coeffs == tuple(2 ** n for n in range(13))
    # golden mean shift: coefficients are Fibonacci numbers
    fib = [1, 1]
    while len(fib) < 13:
        fib.append(fib[-1] + fib[-2])
    assert zeta_report([[1, 1], [1, 0]], 12).series_from_det.coeffs == tuple(fib)


def test_parse_int_matrix():
    assert parse_int_matrix("# m\n1 1\n1 0\n").tolist() == [[1, 1], [1, 0]]
    with pytest.raises(ValueError):
        parse_int_matrix("1 x\n")
    with pytest.raises(ValueError):
        parse_int_matrix("1 1\n1\n")


def test_seeded_matrices_exp_equals_det():
    rng = random.Random(12)
    for _ in range(200):
        a = random_01_matrix(rng, rng.randint(1, 5))
        rep = zeta_report(a, 12)
        assert rep.series_from_exp == rep.series_from_det
        assert all(c.denominator == 1 and c >= 0 for c in rep.series_from_exp.coeffs)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(0, 3), min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_nonnegative_integer_matrices(a):
    rep = zeta_report(a, 8)
    assert rep.series_from_exp == rep.series_from_det
    assert all(c.denominator == 1 and c >= 0 for c in rep.series_from_exp.coeffs)
    # 1/zeta times zeta is 1 to the truncation order
    assert rep.series_from_exp * PowerSeries.of(rep.rational_form.denominator, 8) == PowerSeries.of([1], 8)


@pytest.mark.parametrize("size", range(1, 7))
def test_permutation_matrices_against_orbit_counts(size):
    for perm in permutations(range(size)):
        a = [[int(perm[i] == j) for j in range(size)] for i in range(size)]
        counts = periodic_point_counts(a, 6)
        for n in range(1, 7):
            assert counts[n - 1] == permutation_periodic_points(list(perm), n) \
                == cycle_type_periodic_points(list(perm), n)
