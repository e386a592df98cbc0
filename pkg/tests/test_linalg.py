from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diginv.linalg import (
    Matrix, PowerSeries, char_poly, det_one_minus_tA, determinant, nullspace_basis, poly_eval, rank,
    series_exp, series_inverse, series_log, smith_normal_form, solve, sparse_nullspace, sparse_rank,
    symmetric_eigenvalues,
)
from diginv.laplacian import complete_graph, cycle, laplacian

small_ints = st.integers(-4, 4)


def int_matrices(max_rows=5, max_cols=5):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: st.lists(st.lists(small_ints, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]))


def symmetric_int_matrices(max_n=8):
    def build(n):
        return st.lists(small_ints, min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2).map(
            lambda xs: _fill_symmetric(n, xs))
    return st.integers(1, max_n).flatmap(build)


def _fill_symmetric(n, xs):
    m = [[0] * n for _ in range(n)]
    it = iter(xs)
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = next(it)
    return m


# ---------------------------------------------------------------------------
# examples


def test_rank_examples():
    assert rank(Matrix.identity(3)) == 3 and nullspace_basis(Matrix.identity(3)) == []
    z = Matrix.zeros(2, 3)
    assert rank(z) == 0 and len(nullspace_basis(z)) == 3
    lk3 = laplacian(complete_graph(3))
    assert rank(lk3) == 2
    (v,) = nullspace_basis(lk3)
    assert len(set(v)) == 1 and v[0] != 0


def test_smith_examples():
    f = smith_normal_form(Matrix.diagonal([2, 3]))
    assert f.invariant_factors == (1, 6)
    assert (f.left @ Matrix.diagonal([2, 3]) @ f.right) == f.diagonal
    assert smith_normal_form(Matrix.identity(4)).invariant_factors == (1, 1, 1, 1)
    reduced = laplacian(complete_graph(4)).delete(0, 0)
    f = smith_normal_form(reduced)
    assert f.invariant_factors == (1, 4, 4)


def test_smith_rejects_rationals():
    with pytest.raises(TypeError):
        smith_normal_form([[Fraction(1, 2)]])


def test_determinant_examples():
    assert determinant([[1, 2], [3, 4]]) == -2
    assert det_one_minus_tA([[1]]) == [1, -1]
    assert char_poly(laplacian(complete_graph(3))) == [0, 9, -6, 1]  # x(x-3)^2
    with pytest.raises(ValueError):
        determinant([[1, 2]])


def test_eigenvalue_examples():
    assert symmetric_eigenvalues(laplacian(complete_graph(3))) == pytest.approx([0, 3, 3], abs=1e-9)
    assert symmetric_eigenvalues(laplacian(cycle(4))) == pytest.approx([0, 2, 2, 4], abs=1e-9)
    assert symmetric_eigenvalues(Matrix.zeros(3, 3)) == pytest.approx([0, 0, 0], abs=1e-12)
    with pytest.raises(ValueError, match="symmetric"):
        symmetric_eigenvalues([[0, 1], [0, 0]])


def test_series_examples():
    one = series_exp(PowerSeries.of([0], order=6))
    assert one.coeffs == (1, 0, 0, 0, 0, 0, 0)
    s = PowerSeries.of([0] + [Fraction(2 ** n, n) for n in range(1, 6)])
    assert series_exp(s).coeffs == tuple(2 ** n for n in range(6))
    assert series_exp(s) == series_inverse(PowerSeries.of([1, -2], order=5))
    assert series_inverse(PowerSeries.of([1, -1], order=7)).coeffs == (1,) * 8
    with pytest.raises(ValueError):
        series_exp(PowerSeries.of([1, 1]))
    with pytest.raises(ValueError):
        series_inverse(PowerSeries.of([0, 1]))


def test_solve_and_sparse():
    assert solve([[2, 0], [0, 4]], [2, 2]) == [1, Fraction(1, 2)]
    assert solve([[1, 1], [1, 1]], [1, 2]) is None
    rows = [{0: 1, 1: -1}, {1: 1, 2: -1}]
    assert sparse_rank(rows) == 2
    basis = sparse_nullspace(rows, 3)
    assert len(basis) == 1


# ---------------------------------------------------------------------------
# properties


@settings(max_examples=200, deadline=None)
@given(int_matrices())
def test_rank_plus_nullity(a):
    m = Matrix.from_rows(a)
    basis = nullspace_basis(m)
    assert rank(m) + len(basis) == m.cols
    for v in basis:
        assert all(x == 0 for x in m.apply(v))
    assert rank(m) == rank(m.T)
    sparse = [{j: x for j, x in enumerate(r) if x} for r in a]
    assert sparse_rank(sparse) == rank(m)


@settings(max_examples=200, deadline=None)
@given(int_matrices())
def test_smith_properties(a):
    m = Matrix.from_rows(a)
    f = smith_normal_form(m)
    assert f.left @ m @ f.right == f.diagonal
    assert abs(determinant(f.left)) == 1 and abs(determinant(f.right)) == 1
    s = f.invariant_factors
    assert f.rank == len(s) == rank(m) and all(x > 0 for x in s)
    assert all(s[i + 1] % s[i] == 0 for i in range(len(s) - 1))
    d = f.diagonal
    assert all(d[i, j] == 0 for i in range(d.rows) for j in range(d.cols) if i != j)
    # first determinantal divisor is the gcd of the entries
    g = 0
    for row in a:
        for x in row:
            g = gcd(g, x)
    assert (s[0] if s else 0) == g


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_determinant_and_char_poly(a):
    from itertools import permutations
    n = len(a)

    def sign(p):
        s, seen = 1, [False] * n
        for i in range(n):
            if not seen[i]:
                j, c = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = p[j]
                    c += 1
                s *= -1 if c % 2 == 0 else 1
        return s

    leibniz = 0
    for p in permutations(range(n)):
        prod = sign(p)
        for i in range(n):
            prod *= a[i][p[i]]
        leibniz += prod
    assert determinant(a) == leibniz
    cp = char_poly(a)
    assert len(cp) == n + 1 and cp[-1] == 1
    assert cp[0] == (-1) ** n * leibniz
    assert -cp[n - 1] == sum(a[i][i] for i in range(n))
    for x in (-2, 1, 3):
        shifted = [[(x if i == j else 0) - a[i][j] for j in range(n)] for i in range(n)]
        assert poly_eval(cp, x) == determinant(shifted)


def _sturm_count(p, a, b):
    """Distinct real roots of p in (a, b] by Sturm's theorem (exact arithmetic)."""
    def poly_rem(num, den):
        num = list(num)
        while len(num) >= len(den) and any(num):
            c = Fraction(num[-1]) / den[-1]
            shift = len(num) - len(den)
            for i, d in enumerate(den):
                num[shift + i] -= c * d
            num.pop()
            while num and num[-1] == 0:
                num.pop()
        return num

    def trim(q):
        q = [Fraction(x) for x in q]
        while q and q[-1] == 0:
            q.pop()
        return q

    p = trim(p)
    dp = trim([k * p[k] for k in range(1, len(p))])
    seq = [p, dp]
    while seq[-1] and len(seq[-1]) > 1:
        r = poly_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-x for x in r])

    def changes(x):
        vals = [poly_eval(q, x) for q in seq if q]
        vals = [v for v in vals if v != 0]
        return sum(1 for u, v in zip(vals, vals[1:]) if (u < 0) != (v < 0))

    return changes(a) - changes(b)


@settings(max_examples=150, deadline=None)
@given(symmetric_int_matrices(8))
def test_eigenvalues_against_sturm(a):
    tol = 1e-6
    vals = symmetric_eigenvalues(a)
    n = len(a)
    assert len(vals) == n and vals == sorted(vals)
    cp = char_poly(a)
    clusters = []
    for v in vals:
        if clusters and v - clusters[-1][-1] < 2 * tol:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    total_distinct = _sturm_count(cp, Fraction(vals[0]) - 1 - 10 * n * 4, Fraction(vals[-1]) + 1 + 10 * n * 4)
    assert total_distinct == len(clusters)
    for c in clusters:
        lo, hi = Fraction(c[0]) - Fraction(tol), Fraction(c[-1]) + Fraction(tol)
        assert _sturm_count(cp, lo, hi) == 1
    assert sum(vals) == pytest.approx(sum(a[i][i] for i in range(n)), abs=1e-8)


rational = st.fractions(min_value=-3, max_value=3, max_denominator=5)


@settings(max_examples=150, deadline=None)
@given(st.lists(rational, min_size=1, max_size=9))
def test_series_identities(tail):
    s = PowerSeries.of([0] + tail)
    e = series_exp(s)
    assert series_inverse(e) == series_exp(-s)
    assert series_log(e) == s
    n = s.order
    one = PowerSeries.of([1], order=n)
    assert e * series_inverse(e) == one
    # exp solves e' = s' e
    assert e.derivative() == s.derivative() * e
