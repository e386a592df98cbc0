"""Artin-Mazur zeta function of the Markov shift given by a nonnegative integer matrix.

Two independent routes: the exponential of the periodic-point generating
series, and the reciprocal of ``det(I - tA)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvariantViolation
from .linalg import Matrix, PowerSeries, as_matrix, det_one_minus_tA, series_exp, series_inverse

DEFAULT_TERMS = 12


def _check_shift_matrix(a) -> Matrix:
    a = as_matrix(a)
    if not a.is_square:
        raise ValueError(f"shift matrix must be square, got {a.rows}x{a.cols}")
    for r in a.data:
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool):
                if not (isinstance(x, Fraction) and x.denominator == 1):
                    raise ValueError(f"shift matrix entries must be integers, got {x!r}")
            if x < 0:
                raise ValueError(f"shift matrix entries must be nonnegative, got {x}")
    return Matrix.from_rows([[int(x) for x in r] for r in a.data], a.cols)


def periodic_point_counts(a, n: int) -> list[int]:
    """``p_k = trace(A^k)`` for k = 1..n."""
    a = _check_shift_matrix(a)
    if n < 1:
        raise ValueError("need at least one periodic count")
    counts = []
    power = Matrix.identity(a.rows)
    for _ in range(n):
        power = power @ a
        counts.append(sum(power[i, i] for i in range(a.rows)))
    return counts


def artin_mazur_series(a, order: int = DEFAULT_TERMS) -> PowerSeries:
    """Truncation of exp(sum p_n t^n / n); integrality of every coefficient is asserted."""
    a = _check_shift_matrix(a)
    if order < 0:
        raise ValueError("negative truncation order")
    if order == 0:
        return PowerSeries.of([1])
    p = periodic_point_counts(a, order)
    log_series = PowerSeries.of([0] + [Fraction(p[k - 1], k) for k in range(1, order + 1)])
    z = series_exp(log_series)
    if not z.is_integral():
        raise InvariantViolation(f"zeta coefficients not integral: {z.coeffs}")
    return z


@dataclass(frozen=True)
class RationalForm:
    numerator: tuple[int, ...]
    denominator: tuple[int, ...]
    """Both polynomials in t, lowest degree first."""

    def series(self, order: int) -> PowerSeries:
        num = PowerSeries.of(self.numerator, order)
        return num * series_inverse(PowerSeries.of(self.denominator, order))

    def __str__(self) -> str:
        return f"{format_poly(self.numerator)} / ({format_poly(self.denominator)})"


def format_poly(coeffs: Sequence[int], var: str = "t") -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}{'*' + mono if mono else ''}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def zeta_rational_form(a) -> RationalForm:
    """1 / det(I - tA), the denominator from the exact characteristic polynomial."""
    a = _check_shift_matrix(a)
    den = [int(c) for c in det_one_minus_tA(a)] if a.rows else [1]
    while len(den) > 1 and den[-1] == 0:
        den.pop()
    return RationalForm((1,), tuple(den))


@dataclass
class ZetaReport:
    periodic_counts: list[int]
    series_from_exp: PowerSeries
    series_from_det: PowerSeries
    rational_form: RationalForm


def zeta_report(a, order: int = DEFAULT_TERMS) -> ZetaReport:
    """Both computations, with coefficientwise equality asserted."""
    a = _check_shift_matrix(a)
    if order < 1:
        raise ValueError("need at least one term")
    from_exp = artin_mazur_series(a, order)
    rational = zeta_rational_form(a)
    from_det = rational.series(order)
    if from_exp.coeffs != from_det.coeffs:
        raise InvariantViolation(
            f"exp-series {from_exp.coeffs} disagrees with 1/det(I - tA) {from_det.coeffs}")
    return ZetaReport(periodic_point_counts(a, order), from_exp, from_det, rational)


def parse_int_matrix(text: str | bytes) -> Matrix:
    """Whitespace-separated integer rows, one per line; '#' starts a comment line."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([int(tok) for tok in line.split()])
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer entry in {line!r}") from None
    if not rows:
        raise ValueError("empty matrix")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged matrix rows")
    return _check_shift_matrix(Matrix.from_rows(rows, width))
