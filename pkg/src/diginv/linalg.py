"""Exact integer/rational linear algebra and truncated power series.

Matrices are small dense immutable objects over Python ints or
:class:`fractions.Fraction`; nothing here ever rounds except
:func:`symmetric_eigenvalues`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

Number = int | Fraction


@dataclass(frozen=True)
class Matrix:
    """Dense ``rows x cols`` matrix with exact entries.

    Integer and rational matrices share this type; rational entries are
    ``Fraction`` instances (always in lowest terms).
    """

    rows: int
    cols: int
    data: tuple[tuple[Number, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("matrix data does not match declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]], cols: int | None = None) -> Matrix:
        data = tuple(tuple(r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, entries: Sequence[Number], rows: int | None = None, cols: int | None = None) -> Matrix:
        rows = len(entries) if rows is None else rows
        cols = rows if cols is None else cols
        m = [[0] * cols for _ in range(rows)]
        for i, x in enumerate(entries):
            m[i][i] = x
        return cls.from_rows(m, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Number:
        i, j = ij
        return self.data[i][j]

    def tolist(self) -> list[list[Number]]:
        return [list(r) for r in self.data]

    def row(self, i: int) -> tuple[Number, ...]:
        return self.data[i]

    def column(self, j: int) -> tuple[Number, ...]:
        return tuple(r[j] for r in self.data)

    @property
    def T(self) -> Matrix:
        return Matrix(self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    def __add__(self, other: Matrix) -> Matrix:
        self._same_shape(other)
        return Matrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: Matrix) -> Matrix:
        self._same_shape(other)
        return Matrix(self.rows, self.cols, tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self) -> Matrix:
        return self.scale(-1)

    def scale(self, c: Number) -> Matrix:
        return Matrix(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.data))

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.T.data
        return Matrix(self.rows, other.cols, tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.data))

    def apply(self, v: Sequence[Number]) -> list[Number]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum(a * b for a, b in zip(r, v)) for r in self.data]

    def delete(self, row: int, col: int) -> Matrix:
        """Drop one row and one column."""
        data = [r[:col] + r[col + 1:] for i, r in enumerate(self.data) if i != row]
        return Matrix.from_rows(data, self.cols - 1)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.data for a in r)

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self.data[i][j] == self.data[j][i] for i in range(self.rows) for j in range(i))

    def _same_shape(self, other: Matrix):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __str__(self) -> str:
        return "\n".join(" ".join(str(a) for a in r) for r in self.data)


def as_matrix(m: Matrix | Sequence[Sequence[Number]]) -> Matrix:
    return m if isinstance(m, Matrix) else Matrix.from_rows(m)


# ---------------------------------------------------------------------------
# elimination


def rref(m: Matrix | Sequence[Sequence[Number]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals.

    Returns the nonzero rows and the pivot column list.
    """
    m = as_matrix(m)
    a = [[Fraction(x) for x in r] for r in m.data]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        p = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return a[:r], pivots


def rank(m: Matrix | Sequence[Sequence[Number]]) -> int:
    m = as_matrix(m)
    if m.rows == 0 or m.cols == 0:
        return 0
    if all(isinstance(x, int) for r in m.data for x in r):
        return _bareiss_rank(m)
    return len(rref(m)[1])


def _bareiss_rank(m: Matrix) -> int:
    # fraction-free elimination; every division below is exact
    a = [list(r) for r in m.data]
    rows, cols = m.rows, m.cols
    prev = 1
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == rows:
            break
    return r


def nullspace_basis(m: Matrix | Sequence[Sequence[Number]], cols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{v : m v = 0}``, each vector verified by multiplication."""
    m = as_matrix(m) if cols is None else Matrix.from_rows(m, cols)
    red, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[free]
        basis.append(v)
    for v in basis:
        if any(x != 0 for x in m.apply(v)):
            raise ArithmeticError("nullspace vector failed verification")
    return basis


def _sparse_eliminate(rows: Sequence[dict[int, Number]]) -> dict[int, dict[int, Fraction]]:
    """Fully reduced sparse row echelon form keyed by pivot column."""
    pivot_rows: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        row = {c: Fraction(x) for c, x in raw.items() if x != 0}
        for pc, prow in pivot_rows.items():
            if pc in row:
                _axpy(row, -row[pc], prow)
        if not row:
            continue
        pc = min(row)
        inv = 1 / row[pc]
        row = {c: x * inv for c, x in row.items()}
        for qrow in pivot_rows.values():
            if pc in qrow:
                _axpy(qrow, -qrow[pc], row)
        pivot_rows[pc] = row
    return pivot_rows


def _axpy(y: dict[int, Fraction], a: Fraction, x: dict[int, Fraction]):
    # y += a * x, dropping cancelled entries
    for c, v in x.items():
        w = y.get(c, 0) + a * v
        if w:
            y[c] = w
        else:
            y.pop(c, None)


def sparse_rank(rows: Sequence[dict[int, Number]]) -> int:
    return len(_sparse_eliminate(rows))


def sparse_nullspace(constraints: Sequence[dict[int, Number]], ncols: int) -> list[tuple[int, dict[int, Fraction]]]:
    """Nullspace of a sparse system given as ``{column: coefficient}`` rows.

    Returns ``(free_column, vector)`` pairs; each vector is 1 at its own free
    column and 0 at every other free column.
    """
    pivot_rows = _sparse_eliminate(constraints)
    by_free: dict[int, dict[int, Fraction]] = {}
    for free in range(ncols):
        if free not in pivot_rows:
            by_free[free] = {free: Fraction(1)}
    for pc, prow in pivot_rows.items():
        for c, x in prow.items():
            if c != pc:
                by_free[c][pc] = -x
    return sorted(by_free.items())


def solve(m: Matrix | Sequence[Sequence[Number]], b: Sequence[Number]) -> list[Fraction] | None:
    """One rational solution of ``m x = b``, or None if inconsistent."""
    m = as_matrix(m)
    if len(b) != m.rows:
        raise ValueError("dimension mismatch")
    aug = Matrix.from_rows([list(r) + [bi] for r, bi in zip(m.data, b)], m.cols + 1)
    red, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for row, pc in zip(red, pivots):
        x[pc] = row[m.cols]
    return x


def primitive_vector(v: Sequence[Number]) -> list[int]:
    """Scale a rational vector to coprime integers with a positive leading entry."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    lead = next(x for x in ints if x)
    s = g if lead > 0 else -g
    return [x // s for x in ints]


def determinant(a: Matrix | Sequence[Sequence[Number]]) -> Number:
    """Exact determinant; Bareiss elimination for integer input."""
    a = as_matrix(a)
    if not a.is_square:
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = [list(r) for r in a.data]
    integral = all(isinstance(x, int) for r in m for x in r)
    if not integral:
        m = [[Fraction(x) for x in r] for r in m]
    sign = 1
    prev: Number = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if p is None:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num // prev if integral else num / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def char_poly(a: Matrix | Sequence[Sequence[Number]]) -> list[Number]:
    """Coefficients of ``det(xI - a)``, lowest degree first (monic).

    Faddeev-LeVerrier recursion; the divisions by k are exact for
    integer input.
    """
    a = as_matrix(a)
    if not a.is_square:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = a.rows
    coeffs: list[Number] = [0] * (n + 1)
    coeffs[n] = 1
    integral = all(isinstance(x, int) for r in a.data for x in r)
    mk = Matrix.zeros(n, n)
    ident = Matrix.identity(n)
    for k in range(1, n + 1):
        mk = a @ mk + ident.scale(coeffs[n - k + 1])
        tr = sum((a @ mk)[i, i] for i in range(n))
        c = Fraction(-tr, k) if not integral else -tr // k
        if integral and -tr % k:
            raise ArithmeticError("non-exact Faddeev-LeVerrier step")
        coeffs[n - k] = c
    return coeffs


def det_one_minus_tA(a: Matrix | Sequence[Sequence[Number]]) -> list[Number]:
    """Coefficients of the polynomial ``det(I - tA)``, lowest degree first."""
    return list(reversed(char_poly(a)))


def poly_eval(coeffs: Sequence[Number], x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def symmetric_eigenvalues(a: Matrix | Sequence[Sequence[float]], tol: float = 1e-9) -> list[float]:
    """Ascending eigenvalues of a real symmetric matrix.

    Integer/rational input must be exactly symmetric; float input is
    checked to ``tol``.
    """
    rows = a.tolist() if isinstance(a, Matrix) else [list(r) for r in a]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("eigenvalues of a non-square matrix")
    exact = all(isinstance(x, (int, Fraction)) for r in rows for x in r)
    for i in range(n):
        for j in range(i):
            d = rows[i][j] - rows[j][i]
            if (d != 0) if exact else (abs(d) > tol):
                raise ValueError("matrix is not symmetric")
    if n == 0:
        return []
    vals = np.linalg.eigvalsh(np.array(rows, dtype=float))
    return sorted(float(v) for v in vals)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """``left @ a @ right == diagonal`` with ``left``, ``right`` unimodular."""

    invariant_factors: tuple[int, ...]
    rank: int
    diagonal: Matrix
    left: Matrix
    right: Matrix

    @property
    def diagonal_entries(self) -> tuple[int, ...]:
        """All min(rows, cols) diagonal entries, zeros included."""
        k = min(self.diagonal.rows, self.diagonal.cols)
        return tuple(self.diagonal[i, i] for i in range(k))


def smith_normal_form(a: Matrix | Sequence[Sequence[int]]) -> SmithForm:
    a = as_matrix(a)
    rows, cols = a.shape
    m = [list(r) for r in a.data]
    if any(not isinstance(x, int) for r in m for x in r):
        raise TypeError("Smith normal form needs integer entries")
    p = [[int(i == j) for j in range(rows)] for i in range(rows)]
    q = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        p[i], p[j] = p[j], p[i]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in q:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):
        # row_dst += f * row_src
        m[dst] = [x + f * y for x, y in zip(m[dst], m[src])]
        p[dst] = [x + f * y for x, y in zip(p[dst], p[src])]

    def add_col(dst, src, f):
        for r in m:
            r[dst] += f * r[src]
        for r in q:
            r[dst] += f * r[src]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest |entry| in the trailing block, row-major tie-break
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = m[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            dirty = False
            for i in range(t + 1, rows):
                if m[i][t]:
                    add_row(i, t, -(m[i][t] // m[t][t]))
                    if m[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if m[t][j]:
                    add_col(j, t, -(m[t][j] // m[t][t]))
                    if m[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, rows):
                    if m[i][t] and (best is None or abs(m[i][t]) < best[0]):
                        best = (abs(m[i][t]), i, "r")
                for j in range(t, cols):
                    if m[t][j] and (best is None or abs(m[t][j]) < best[0]):
                        best = (abs(m[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if m[i][j] % m[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            p[t] = [-x for x in p[t]]
        t += 1

    diag = Matrix.from_rows(m, cols)
    factors = tuple(m[i][i] for i in range(t))
    form = SmithForm(factors, t, diag, Matrix.from_rows(p, rows), Matrix.from_rows(q, cols))
    _check_smith(a, form)
    return form


def _check_smith(a: Matrix, form: SmithForm):
    if form.left @ a @ form.right != form.diagonal:
        raise ArithmeticError("Smith witnesses do not reproduce the diagonal form")
    d = form.diagonal
    if any(d[i, j] for i in range(d.rows) for j in range(d.cols) if i != j):
        raise ArithmeticError("Smith form is not diagonal")
    s = form.invariant_factors
    if any(x <= 0 for x in s) or any(s[i + 1] % s[i] for i in range(len(s) - 1)):
        raise ArithmeticError("invariant factors violate the divisibility chain")


# ---------------------------------------------------------------------------
# truncated power series


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients ``c_0..c_N`` of a series truncated after ``t^N``."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a power series needs at least the constant term")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def of(cls, coeffs: Iterable[Number], order: int | None = None) -> PowerSeries:
        c = [Fraction(x) for x in coeffs]
        if order is not None:
            c = (c + [Fraction(0)] * (order + 1))[:order + 1]
        return cls(tuple(c))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def _align(self, other: PowerSeries) -> int:
        return min(self.order, other.order)

    def __add__(self, other: PowerSeries) -> PowerSeries:
        n = self._align(other)
        return PowerSeries(tuple(self[k] + other[k] for k in range(n + 1)))

    def __sub__(self, other: PowerSeries) -> PowerSeries:
        return self + (-other)

    def __neg__(self) -> PowerSeries:
        return PowerSeries(tuple(-c for c in self.coeffs))

    def __mul__(self, other: PowerSeries | Number) -> PowerSeries:
        if not isinstance(other, PowerSeries):
            return PowerSeries(tuple(c * other for c in self.coeffs))
        n = self._align(other)
        return PowerSeries(tuple(
            sum((self[i] * other[k - i] for i in range(k + 1)), Fraction(0)) for k in range(n + 1)))

    __rmul__ = __mul__

    def derivative(self) -> PowerSeries:
        if self.order == 0:
            return PowerSeries((Fraction(0),))
        return PowerSeries(tuple(k * self[k] for k in range(1, self.order + 1)))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)


def series_exp(s: PowerSeries) -> PowerSeries:
    """exp(s) for s with zero constant term, via ``n f_n = sum k s_k f_{n-k}``."""
    if s[0] != 0:
        raise ValueError("series_exp needs a zero constant term")
    f = [Fraction(1)]
    for n in range(1, s.order + 1):
        f.append(sum((k * s[k] * f[n - k] for k in range(1, n + 1)), Fraction(0)) / n)
    return PowerSeries(tuple(f))


def series_inverse(s: PowerSeries) -> PowerSeries:
    """Reciprocal 1/s for s with nonzero constant term."""
    if s[0] == 0:
        raise ValueError("series_inverse needs a nonzero constant term")
    inv0 = 1 / s[0]
    g = [inv0]
    for n in range(1, s.order + 1):
        g.append(-inv0 * sum((s[k] * g[n - k] for k in range(1, n + 1)), Fraction(0)))
    return PowerSeries(tuple(g))


def series_log(s: PowerSeries) -> PowerSeries:
    """log(s) for s with constant term 1."""
    if s[0] != 1:
        raise ValueError("series_log needs constant term 1")
    q = s.derivative() * series_inverse(PowerSeries(s.coeffs[:-1])) if s.order else None
    out = [Fraction(0)]
    for k in range(1, s.order + 1):
        out.append(q[k - 1] / k)
    return PowerSeries(tuple(out))
