"""Rayleigh-Schrodinger ground-state series for two anharmonic oscillators.

``pt-cubic``  H = p^2 + x^2/4 + i*lam*x^3,  E = 1/2 + sum_n b_n lam^(2n)
``quartic``   H = p^2 + x^2 + beta*x^4,     E = 1   + sum_n B_n beta^n

Both series are produced by the polynomial-times-Gaussian recursion: the
wavefunction is ``exp(-a x^2/2) * sum_k g^k P_k(x)`` and each ``P_k`` is
obtained from a triangular solve of ``-P'' + a x P' = rhs``. The energy
coefficient at each step is fixed by the requirement that the constant term
of the equation is satisfied, with ``P_k(0) = 0`` for ``k >= 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import gmpy2
from gmpy2 import mpq, mpz

from .errors import SignViolation
from .numeric import ExactRational, real_context, rational


class Hamiltonian(str, enum.Enum):
    PT_CUBIC = "pt-cubic"
    QUARTIC = "quartic"

    @classmethod
    def parse(cls, value) -> "Hamiltonian":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"ptcubic": "pt-cubic", "cubic": "pt-cubic", "quarticaho": "quartic", "qaho": "quartic"}
        return cls(aliases.get(key.replace("-", ""), key))


UNPERTURBED_ENERGY = {Hamiltonian.PT_CUBIC: mpq(1, 2), Hamiltonian.QUARTIC: mpq(1)}


@dataclass(frozen=True)
class PerturbationSeries:
    """Exact ground-state energy coefficients.

    ``coefficients[0]`` is the unperturbed energy and ``coefficients[n]`` for
    ``n >= 1`` holds b_n (pt-cubic) or B_n (quartic). The energy shift series
    used for summation has coefficients ``coefficients[1:]``.
    """

    hamiltonian: Hamiltonian
    coefficients: tuple
    wavefunction_degree: int = 0
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def max_order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def unperturbed_energy(self) -> ExactRational:
        return self.coefficients[0]

    @property
    def shift_coefficients(self) -> tuple:
        """Coefficients gamma_nu = c_(nu+1) of the energy-shift series."""
        return self.coefficients[1:]

    def __getitem__(self, n: int) -> ExactRational:
        return self.coefficients[n]

    def truncated(self, max_order: int) -> "PerturbationSeries":
        if max_order > self.max_order:
            raise ValueError(f"series only has {self.max_order} orders")
        return PerturbationSeries(self.hamiltonian, self.coefficients[: max_order + 1], self.wavefunction_degree, dict(self.metadata))


@dataclass
class _Level:
    """Polynomial stored as integer numerators over one common denominator."""

    numerators: list
    denominator: object


def _right_hand_side(terms: list, source: _Level, power: int, top: int):
    """Integer vector ``acc`` and scale ``s`` with ``acc / s = sum c_j P_j - x^power * source``.

    ``terms`` holds ``(coefficient, level)`` pairs. Denominators form a divisor
    chain, so every level is brought to the denominator of ``source``.
    """
    den = source.denominator
    mults = [(rational(c) * den / lvl.denominator, lvl) for c, lvl in terms]
    w = mpz(1)
    for m, _ in mults:
        w = gmpy2.lcm(w, m.denominator)
    acc = [mpz(0)] * (top + 1)
    nums = source.numerators
    for m in range(len(nums)):
        c = nums[m]
        if c:
            acc[m + power] -= w * c
    for mult, lvl in mults:
        f = mpz(mult.numerator) * (w // mult.denominator)
        if not f:
            continue
        nums = lvl.numerators
        for m in range(len(nums)):
            c = nums[m]
            if c:
                acc[m] += f * c
    return acc, den * w


def _solve_level(acc: list, scale, parity: int, top: int, a: int) -> tuple:
    """Solve ``-q'' + a x q' = acc / scale`` for the powers ``x^m``, ``m >= 1`` of given parity.

    ``q(0)`` is fixed to zero. Returns the lcm of the denominators, the dense
    coefficient list and ``-2 q_2``, the value the
    constant term of the left-hand side takes.
    """
    q = [mpq(0)] * (top + 3)
    start = top if top % 2 == parity else top - 1
    for m in range(start, 0, -2):
        q[m] = (mpq(acc[m], scale) + (m + 2) * (m + 1) * q[m + 2]) / (a * m)
    constant = -2 * q[2]
    q = q[: top + 1]
    while len(q) > 1 and q[-1] == 0:
        q.pop()
    den = mpz(1)
    for c in q:
        if c:
            den = gmpy2.lcm(den, c.denominator)
    return den, q, constant


def _make_level(q: list, den, previous: _Level) -> _Level:
    den = gmpy2.lcm(den, previous.denominator)
    return _Level([mpz(c.numerator) * (den // c.denominator) if c else mpz(0) for c in q], den)


def generate_pt_cubic(max_order: int) -> PerturbationSeries:
    """Coefficients b_1..b_max_order of the PT-symmetric cubic oscillator.

    With ``P_k = i^k Q_k`` the recursion is real:
    ``-Q_k'' + x Q_k' + x^3 Q_(k-1) = sum_j (-1)^j b_j Q_(k-2j)``.
    Two wavefunction orders are needed per energy coefficient.
    """
    if max_order < 0:
        raise ValueError("max_order must be non-negative")
    levels = [_Level([mpz(1)], mpz(1))]
    b: list = [mpq(1, 2)]
    for k in range(1, 2 * max_order + 1):
        top = 3 * k
        terms = [(b[j] if j % 2 == 0 else -b[j], levels[k - 2 * j]) for j in range(1, (k - 1) // 2 + 1)]
        acc, scale = _right_hand_side(terms, levels[k - 1], 3, top)
        den, q, constant = _solve_level(acc, scale, k % 2, top, 1)
        if k % 2 == 0:
            j = k // 2
            # constant term: -2 q_2 = rhs_0 + (-1)^j b_j
            value = constant - mpq(acc[0], scale)
            b.append(value if j % 2 == 0 else -value)
        levels.append(_make_level(q, den, levels[k - 1]))
    degree = len(levels[-1].numerators) - 1 if max_order else 0
    return PerturbationSeries(Hamiltonian.PT_CUBIC, tuple(b), degree)


def generate_quartic(max_order: int) -> PerturbationSeries:
    """Coefficients B_1..B_max_order of H = p^2 + x^2 + beta x^4.

    ``-R_k'' + 2x R_k' + x^4 R_(k-1) = sum_(j=1..k) B_j R_(k-j)``.
    """
    if max_order < 0:
        raise ValueError("max_order must be non-negative")
    levels = [_Level([mpz(1)], mpz(1))]
    energies: list = [mpq(1)]
    for k in range(1, max_order + 1):
        top = 4 * k
        terms = [(energies[j], levels[k - j]) for j in range(1, k)]
        acc, scale = _right_hand_side(terms, levels[k - 1], 4, top)
        den, q, constant = _solve_level(acc, scale, 0, top, 2)
        energies.append(constant - mpq(acc[0], scale))
        levels.append(_make_level(q, den, levels[k - 1]))
    degree = len(levels[-1].numerators) - 1 if max_order else 0
    series = PerturbationSeries(Hamiltonian.QUARTIC, tuple(energies), degree)
    series.metadata["denominator_odd_part"] = denominator_odd_part(series)
    return series


def generate(hamiltonian, max_order: int) -> PerturbationSeries:
    hamiltonian = Hamiltonian.parse(hamiltonian)
    if hamiltonian is Hamiltonian.PT_CUBIC:
        return generate_pt_cubic(max_order)
    return generate_quartic(max_order)


def denominator_odd_part(series: PerturbationSeries) -> int:
    """Odd part of the lcm of all coefficient denominators (1 if they are powers of two)."""
    lcm = mpz(1)
    for c in series.coefficients[1:]:
        lcm = gmpy2.lcm(lcm, c.denominator)
    while lcm % 2 == 0:
        lcm //= 2
    return int(lcm)


def asymptotic_reference(hamiltonian, n: int, digits: int = 50):
    """Leading large-order value of the n-th coefficient.

    pt-cubic: (-1)^(n+1) 60^(n+1/2) (2 pi)^(-3/2) Gamma(n+1/2)
    quartic:  (-1)^(n+1) 4 pi^(-3/2) (3/2)^(n+1/2) Gamma(n+1/2)
    Gamma(n+1/2) is taken as (2n)! sqrt(pi) / (4^n n!).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    hamiltonian = Hamiltonian.parse(hamiltonian)
    ctx = real_context(digits)
    half_gamma_ratio = ctx.mpf(int(gmpy2.fac(2 * n))) / int(mpz(4) ** n * gmpy2.fac(n))  # Gamma(n+1/2)/sqrt(pi)
    sign = 1 if n % 2 == 1 else -1
    if hamiltonian is Hamiltonian.PT_CUBIC:
        base = ctx.mpf(60)
        value = base ** n * ctx.sqrt(base) * half_gamma_ratio / (2 * ctx.sqrt(2) * ctx.pi)
    else:
        base = ctx.mpf(3) / 2
        value = 4 * base ** n * ctx.sqrt(base) * half_gamma_ratio / ctx.pi
    return sign * value


def asymptotic_ratio(series: PerturbationSeries, n: int, digits: int = 50):
    """c_n divided by its leading large-order value; tends to 1 from below."""
    ref = asymptotic_reference(series.hamiltonian, n, digits)
    c = series[n]
    return ref.context.mpf(int(c.numerator)) / int(c.denominator) / ref


def map_coupling(lam) -> ExactRational:
    """Quartic coupling with the same divergence rate as the cubic one: beta = 40 lam^2."""
    lam = rational(lam)
    return 40 * lam * lam


@dataclass(frozen=True)
class MomentView:
    """Stieltjes moments mu_nu = (-1)^nu c_(nu+1) of an energy-shift series."""

    moments: tuple

    def __len__(self) -> int:
        return len(self.moments)

    def __getitem__(self, i):
        return self.moments[i]


def moment_view(series: PerturbationSeries | Sequence) -> MomentView:
    """Strip the alternating signs; raises ``SignViolation`` if a moment is not positive.

    Accepts a ``PerturbationSeries`` or a plain sequence of shift coefficients.
    """
    if isinstance(series, PerturbationSeries):
        shift = series.shift_coefficients
    else:
        shift = [rational(c) for c in series]
    if not shift:
        raise ValueError("series has no coefficients")
    moments = []
    for nu, c in enumerate(shift):
        mu = c if nu % 2 == 0 else -c
        if mu <= 0:
            raise SignViolation(nu, c)
        moments.append(mu)
    return MomentView(tuple(moments))
