"""Exact rationals, high-precision reals, polynomials and truncated power series.

Exact values are ``gmpy2.mpq`` instances (always stored in lowest terms with a
positive denominator). Floating values are ``mpf`` numbers bound to a private
mpmath context whose precision is fixed at creation, so results never depend
on the global ``mpmath.mp`` setting.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
import mpmath
from gmpy2 import mpq, mpz

from .errors import SingularSystem, ZeroConstantTerm

ExactRational = type(mpq())
BigReal = mpmath.mpf

MIN_DIGITS = 50
DEFAULT_DIGITS = 600


def rational(value) -> ExactRational:
    """Coerce ``value`` to an exact rational.

    Accepts ints, ``Fraction``, ``mpq``/``mpz`` and strings such as ``"1/7"``,
    ``"-391/49"`` or ``"0.25"``. Floats are rejected because they are rarely
    what the caller meant.
    """
    if isinstance(value, ExactRational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, type(mpz()))):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip().replace(" ", "")
        if "/" in text:
            p, q = text.split("/", 1)
            den = int(q)
            if den == 0:
                raise ZeroDivisionError(f"zero denominator in {value!r}")
            return mpq(int(p), den)
        return mpq(Fraction(text).numerator, Fraction(text).denominator)
    if isinstance(value, float):
        raise TypeError("refusing to convert a float to an exact rational; pass a string")
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def is_canonical(x: ExactRational) -> bool:
    return x.denominator > 0 and gmpy2.gcd(x.numerator, x.denominator) == 1


def format_rational(x: ExactRational) -> str:
    """``"p"`` for integers, ``"p/q"`` otherwise."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@functools.lru_cache(maxsize=None)
def real_context(digits: int) -> mpmath.ctx_mp.MPContext:
    """An mpmath context carrying ``digits`` decimal digits."""
    if digits < MIN_DIGITS:
        raise ValueError(f"precision must be at least {MIN_DIGITS} digits, got {digits}")
    ctx = mpmath.MPContext()
    ctx.dps = digits
    return ctx


def to_real(x, digits: int = DEFAULT_DIGITS) -> BigReal:
    """Round an exact rational to a real carrying ``digits`` decimal digits."""
    ctx = real_context(digits)
    x = rational(x)
    if x.numerator == 0:
        return ctx.zero
    return ctx.mpf(int(x.numerator)) / int(x.denominator)


def converter(digits: int | None):
    """Return a function mapping exact rationals into the requested number mode.

    ``digits=None`` selects exact arithmetic (identity on rationals).
    """
    if digits is None:
        return rational
    ctx = real_context(digits)

    def convert(x):
        x = rational(x)
        return ctx.mpf(int(x.numerator)) / int(x.denominator)

    return convert


def is_zero(x) -> bool:
    return x == 0


# --------------------------------------------------------------------------
# Polynomials


@dataclass(frozen=True)
class Polynomial:
    """Dense univariate polynomial, ``coefficients[i]`` multiplies ``x**i``."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = list(self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            coeffs = [mpq(0)]
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def from_values(cls, values: Iterable) -> "Polynomial":
        return cls(tuple(rational(v) for v in values))

    @property
    def degree(self) -> int:
        if len(self.coefficients) == 1 and self.coefficients[0] == 0:
            return -1
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = self.coefficients[-1] * 1
        for c in reversed(self.coefficients[:-1]):
            acc = acc * x + c
        return acc

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return self.coefficients[0] * 0

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        return Polynomial(tuple(self[i] + other[i] for i in range(n)))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coefficients, other.coefficients
        out = [a[0] * 0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Polynomial(tuple(out))


# --------------------------------------------------------------------------
# Truncated power series


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series ``sum c_k z**k`` known through ``z**order``.

    Coefficients may be exact rationals or ``mpf`` values of one context; the
    two kinds must not be mixed within an expression.
    """

    coefficients: tuple

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("a truncated series needs at least one coefficient")
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    @classmethod
    def constant(cls, value, order: int) -> "TruncatedSeries":
        zero = value * 0
        return cls((value,) + (zero,) * order)

    @classmethod
    def from_values(cls, values: Iterable, order: int | None = None) -> "TruncatedSeries":
        vals = [rational(v) for v in values]
        if order is not None:
            vals = (vals + [mpq(0)] * (order + 1))[: order + 1]
        return cls(tuple(vals))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, k):
        return self.coefficients[k]

    def __iter__(self):
        return iter(self.coefficients)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coefficients[: order + 1])

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries((self[0] + other,) + self.coefficients[1:])
        m = min(self.order, other.order)
        return TruncatedSeries(tuple(self[k] + other[k] for k in range(m + 1)))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return TruncatedSeries(tuple(c * other for c in self.coefficients))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_div(self, other)
        return TruncatedSeries(tuple(c / other for c in self.coefficients))

    def __rtruediv__(self, other):
        return series_div(TruncatedSeries.constant(other + self[0] * 0, self.order), self)

    def shift(self) -> "TruncatedSeries":
        """Multiply by ``z`` keeping the truncation order."""
        zero = self[0] * 0
        return TruncatedSeries((zero,) + self.coefficients[:-1])

    def __call__(self, z):
        acc = self.coefficients[-1] * 1
        for c in reversed(self.coefficients[:-1]):
            acc = acc * z + c
        return acc


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the smaller of the two orders."""
    m = min(a.order, b.order)
    ac, bc = a.coefficients, b.coefficients
    out = []
    for k in range(m + 1):
        acc = ac[0] * bc[k]
        for i in range(1, k + 1):
            acc += ac[i] * bc[k - i]
        out.append(acc)
    return TruncatedSeries(tuple(out))


def series_div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Quotient ``a / b`` as a truncated series; ``b`` needs a nonzero constant term."""
    if b[0] == 0:
        raise ZeroConstantTerm("divisor series has zero constant term")
    m = min(a.order, b.order)
    ac, bc = a.coefficients, b.coefficients
    inv0 = 1 / bc[0]
    out = []
    for k in range(m + 1):
        acc = ac[k]
        for i in range(k):
            acc -= out[i] * bc[k - i]
        out.append(acc * inv0)
    return TruncatedSeries(tuple(out))


# --------------------------------------------------------------------------
# Fraction-free linear algebra over the rationals


def _integer_rows(matrix: Sequence[Sequence]) -> list[list]:
    rows = []
    for row in matrix:
        row = [rational(v) for v in row]
        den = mpz(1)
        for v in row:
            den = gmpy2.lcm(den, v.denominator)
        rows.append([mpz(v.numerator) * (den // v.denominator) for v in row])
    return rows


def _bareiss(rows: list[list], ncols: int) -> tuple[list[list], list[int], int]:
    """In-place Bareiss elimination on integer rows.

    Returns the reduced rows, the pivot column of each pivot row and the sign of
    the row permutation. Rows without pivots end up at the bottom.
    """
    nrows = len(rows)
    prev = mpz(1)
    sign = 1
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            sign = -sign
        piv = rows[r][c]
        for i in range(r + 1, nrows):
            ri = rows[i]
            f = ri[c]
            rr = rows[r]
            for j in range(c + 1, len(ri)):
                ri[j] = (piv * ri[j] - f * rr[j]) // prev
            ri[c] = mpz(0)
        # entries left of c in rows below are already zero
        prev = piv
        pivots.append(c)
        r += 1
    return rows, pivots, sign


def fraction_free_det(matrix: Sequence[Sequence]) -> ExactRational:
    """Exact determinant of a square rational matrix."""
    n = len(matrix)
    if n == 0:
        return mpq(1)
    scale = mpq(1)
    rows = []
    for row in matrix:
        row = [rational(v) for v in row]
        den = mpz(1)
        for v in row:
            den = gmpy2.lcm(den, v.denominator)
        scale /= den
        rows.append([mpz(v.numerator) * (den // v.denominator) for v in row])
    rows, pivots, sign = _bareiss(rows, n)
    if len(pivots) < n:
        return mpq(0)
    return mpq(sign * rows[n - 1][n - 1]) * scale


def fraction_free_solve(matrix: Sequence[Sequence], rhs: Sequence, allow_singular: bool = False) -> list:
    """Solve ``matrix @ x = rhs`` exactly.

    Elimination is fraction free on an integer-scaled augmented matrix; back
    substitution is done in rationals. With ``allow_singular`` free unknowns
    are set to zero, provided the system is consistent.
    """
    n = len(matrix)
    ncols = len(matrix[0]) if n else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows = _integer_rows(aug)
    rows, pivots, _ = _bareiss(rows, ncols)
    rank = len(pivots)
    if rank < ncols and not allow_singular:
        raise SingularSystem(f"system of size {ncols} has rank {rank}")
    for i in range(rank, n):
        if rows[i][ncols] != 0:
            raise SingularSystem("inconsistent linear system")
    x = [mpq(0)] * ncols
    for i in reversed(range(rank)):
        c = pivots[i]
        acc = mpq(rows[i][ncols])
        for j in range(c + 1, ncols):
            if rows[i][j] != 0 and x[j] != 0:
                acc -= rows[i][j] * x[j]
        x[c] = acc / rows[i][c]
    return x


def coerce_like(x, like):
    """Express ``x`` in the number kind of ``like`` (exact, or ``like``'s mpf context)."""
    if isinstance(like, ExactRational) or isinstance(like, int):
        return rational(x)
    ctx = like.context
    try:
        q = rational(x)
    except TypeError:
        return ctx.mpf(x)
    return ctx.mpf(int(q.numerator)) / int(q.denominator)
