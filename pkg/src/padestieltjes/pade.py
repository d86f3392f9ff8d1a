"""Wynn's epsilon algorithm, the staircase schedule and direct Pade approximants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from gmpy2 import mpq

from .errors import InsufficientCoefficients
from .numeric import (
    ExactRational,
    Polynomial,
    TruncatedSeries,
    fraction_free_solve,
    rational,
    real_context,
    series_div,
)
from .oscillators import PerturbationSeries


def _shift_coefficients(series) -> list:
    if isinstance(series, PerturbationSeries):
        return list(series.shift_coefficients)
    return [rational(c) for c in series]


def partial_sums(series, coupling, n_max: int) -> list:
    """Exact partial sums ``s_n = sum_(nu<=n) gamma_nu z^nu`` for ``n = 0..n_max``.

    ``series`` is a ``PerturbationSeries`` (its energy-shift coefficients are
    used, gamma_nu = c_(nu+1)) or a plain coefficient sequence.
    """
    gammas = _shift_coefficients(series)
    z = rational(coupling)
    if z < 0:
        raise ValueError("coupling must be non-negative")
    if n_max >= len(gammas):
        raise InsufficientCoefficients(f"partial sum s_{n_max} needs {n_max + 1} coefficients, have {len(gammas)}")
    sums = []
    acc = mpq(0)
    power = mpq(1)
    for nu in range(n_max + 1):
        acc += gammas[nu] * power
        power *= z
        sums.append(acc)
    return sums


class StaircaseIndex(NamedTuple):
    k: int  # epsilon subscript
    n: int  # epsilon superscript
    l: int  # numerator degree
    m: int  # denominator degree


def staircase_index(n: int) -> StaircaseIndex:
    """Position of the n-th staircase approximant: eps_(2[n/2])^(n-2[n/2]) = P_[n/2]^(n-[n/2])."""
    if n < 0:
        raise ValueError("n must be non-negative")
    half = n // 2
    return StaircaseIndex(2 * half, n - 2 * half, n - half, half)


@dataclass(frozen=True)
class EpsilonTable:
    """Triangular epsilon table built from ``input_count`` partial sums.

    ``entries[(k, n)]`` holds eps_k^(n) for ``k >= 0``; eps_(-1)^(n) = 0 is
    implicit. A value of ``None`` marks a cell that is infinite because a
    recursion denominator vanished (or that inherits such a cell); those cells
    are listed in ``degenerate_cells``.
    """

    entries: dict
    input_count: int
    degenerate_cells: tuple = ()
    digits: int | None = None
    working_digits: int | None = None

    @property
    def exact(self) -> bool:
        return self.digits is None

    def entry(self, k: int, n: int):
        if k == -1:
            return 0
        return self.entries[(k, n)]

    def approximant(self, k: int, n: int):
        """Even-subscript element eps_k^(n) = P_(k/2)^(k/2+n)."""
        if k % 2:
            raise ValueError("odd-subscript elements are auxiliary, not approximants")
        value = self.entries[(k, n)]
        if value is None:
            raise ArithmeticError(f"epsilon element ({k}, {n}) is degenerate")
        return value

    def staircase(self, n: int):
        idx = staircase_index(n)
        return self.approximant(idx.k, idx.n)

    def staircase_values(self) -> list:
        return [self.staircase(n) for n in range(self.input_count)]

    def column(self, k: int) -> list:
        return [self.entries[(k, n)] for n in range(self.input_count - k)]


def _guard_digits(values) -> int:
    """Decimal digits in front of the point of the largest value (0 if below 1)."""
    bits = 0
    for v in values:
        if v == 0:
            continue
        if isinstance(v, ExactRational):
            b = int(v.numerator).bit_length() - int(v.denominator).bit_length()
        else:
            man, exp = v.man_exp
            b = exp + int(abs(man)).bit_length()
        bits = max(bits, b)
    return math.ceil(bits * math.log10(2)) + 1 if bits > 0 else 0


def epsilon_table(partial_sums: Sequence, digits: int | None = None, guard: bool = True) -> EpsilonTable:
    """Run Wynn's epsilon algorithm on ``partial_sums``.

    ``digits=None`` works in exact rational arithmetic. Otherwise the table is
    computed with ``digits`` decimal digits plus, when ``guard`` is set, enough
    extra digits to absorb the cancellation between partial sums of size
    ``max |s_n|``.
    """
    values = list(partial_sums)
    if not values:
        raise ValueError("need at least one partial sum")
    if digits is None:
        values = [rational(v) for v in values]
        working = None
        ctx = None
    else:
        exact_inputs = [rational(v) for v in values] if _all_exact(values) else None
        working = digits + (_guard_digits(exact_inputs or values) if guard else 0)
        ctx = real_context(working)
        values = [_to_ctx(ctx, v) for v in values]
    tiny = None if ctx is None else ctx.mpf(10) ** (10 - working)

    count = len(values)
    entries: dict = {}
    degenerate: list = []
    for n, s in enumerate(values):
        entries[(0, n)] = s
    for k in range(0, count - 1):
        for n in range(0, count - k - 1):
            lo, hi = entries[(k, n)], entries[(k, n + 1)]
            prev = 0 if k == 0 else entries[(k - 1, n + 1)]
            if lo is None or hi is None:
                value = prev  # 1/infinity -> 0
            else:
                diff = hi - lo
                if diff == 0 or (tiny is not None and abs(diff) <= tiny * max(abs(hi), abs(lo))):
                    value = None
                elif prev is None:
                    value = None
                else:
                    value = prev + 1 / diff
            entries[(k + 1, n)] = value
            if value is None:
                degenerate.append((k + 1, n))
    return EpsilonTable(entries, count, tuple(degenerate), digits, working)


def _all_exact(values) -> bool:
    try:
        for v in values:
            rational(v)
    except TypeError:
        return False
    return True


def _to_ctx(ctx, v):
    try:
        q = rational(v)
    except TypeError:
        return ctx.mpf(v)
    return ctx.mpf(int(q.numerator)) / int(q.denominator)


def staircase_approximants(series, coupling, n_max: int, digits: int | None = None) -> list:
    """Staircase approximants P_[n/2]^(n-[n/2]) at ``coupling`` for ``n = 0..n_max``."""
    table = epsilon_table(partial_sums(series, coupling, n_max), digits)
    return table.staircase_values()


# --------------------------------------------------------------------------
# Direct (linear-system) Pade approximants


@dataclass(frozen=True)
class PadeApproximant:
    """P_m^l(z) = A_l(z) / B_m(z) with B_m(0) = 1."""

    numerator: Polynomial
    denominator: Polynomial
    l: int
    m: int

    def __call__(self, z):
        return self.numerator(z) / self.denominator(z)

    def taylor(self, order: int) -> TruncatedSeries:
        """Taylor coefficients of the approximant through ``z**order``."""
        num = TruncatedSeries(tuple(self.numerator[i] for i in range(order + 1)))
        den = TruncatedSeries(tuple(self.denominator[i] for i in range(order + 1)))
        return series_div(num, den)


def direct_pade(coefficients: Sequence, l: int, m: int, allow_singular: bool = False) -> PadeApproximant:
    """Pade approximant [l/m] from the linear accuracy-through-order equations.

    The denominator solves ``sum_(j=0..m) b_j gamma_(i-j) = 0`` for
    ``i = l+1..l+m`` with ``b_0 = 1``, exactly and fraction free; the numerator
    follows by convolution. A singular system raises ``SingularSystem`` unless
    ``allow_singular`` is set, in which case free unknowns are set to zero.
    """
    gammas = [rational(c) for c in coefficients]
    if l < 0 or m < 0:
        raise ValueError("degrees must be non-negative")
    if l + m + 1 > len(gammas):
        raise InsufficientCoefficients(f"[{l}/{m}] needs {l + m + 1} coefficients, have {len(gammas)}")

    def g(i):
        return gammas[i] if i >= 0 else mpq(0)

    if m == 0:
        b = [mpq(1)]
    else:
        matrix = [[g(i - j) for j in range(1, m + 1)] for i in range(l + 1, l + m + 1)]
        rhs = [-g(i) for i in range(l + 1, l + m + 1)]
        b = [mpq(1)] + fraction_free_solve(matrix, rhs, allow_singular=allow_singular)
    a = []
    for i in range(l + 1):
        acc = mpq(0)
        for j in range(min(i, m) + 1):
            acc += b[j] * gammas[i - j]
        a.append(acc)
    return PadeApproximant(Polynomial(tuple(a)), Polynomial(tuple(b)), l, m)


@dataclass(frozen=True)
class AccuracyReport:
    order: int  # l + m
    checked_through: int
    first_disagreement: int | None
    disagreements: tuple = field(default=())

    @property
    def ok(self) -> bool:
        return self.first_disagreement is None or self.first_disagreement > self.order


def accuracy_through_order_check(p: PadeApproximant, coefficients: Sequence) -> AccuracyReport:
    """Compare the Taylor expansion of ``p`` with ``coefficients`` index by index."""
    gammas = [rational(c) for c in coefficients]
    top = len(gammas) - 1
    expansion = p.taylor(top)
    bad = tuple(i for i in range(top + 1) if expansion[i] != gammas[i])
    return AccuracyReport(p.l + p.m, top, bad[0] if bad else None, bad)
