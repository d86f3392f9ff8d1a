"""Numerical tests of the Stieltjes property of an energy-shift series.

None of these can prove the property from finitely many coefficients; they
collect evidence. A Stieltjes series must give nested staircase bounds,
monotone Pade sequences, positive Hankel determinants and predicted moments
bounded by the true ones. The Carleman series is only reported as a trend.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InsufficientMoments, SignViolation
from .numeric import ExactRational, coerce_like, fraction_free_det, rational, real_context
from .oscillators import MomentView, PerturbationSeries, moment_view
from .pade import direct_pade, epsilon_table, partial_sums
from .predict import check_prediction_bound, relative_error_table

HANKEL_NOTE = "Hankel positivity is a necessary condition evaluated in addition to the summation and prediction tests."


def _margin_ok(margin, scale, tol) -> str:
    """Classify a margin that should be positive: 'ok', 'ambiguous' or 'violation'."""
    if tol is not None:
        bound = tol * max(1, abs(scale))
        if abs(margin) <= bound:
            return "ambiguous"
    if margin > 0:
        return "ok"
    if margin == 0:
        return "equal"
    return "violation"


@dataclass(frozen=True)
class NestingEvidence:
    """Staircase bounds: even n give upper bounds P_m^m, odd n lower bounds P_m^(m+1)."""

    nesting_violations: tuple = ()  # n = 2m+1 with P_m^(m+1) > P_(m+1)^(m+1)
    upper_violations: tuple = ()  # n = 2m+2 with P_(m+1)^(m+1) >= P_m^m
    lower_violations: tuple = ()  # n = 2m+3 with P_(m+1)^(m+2) <= P_m^(m+1)
    bracket_violations: tuple = ()  # n whose value is on the wrong side of the best estimate
    width_violations: tuple = ()  # n with |v_n - v_(n-1)| > |v_(n-1) - v_(n-2)|
    ambiguous: tuple = ()
    widths: tuple = ()
    best: object = None

    @property
    def ok(self) -> bool:
        return not (self.nesting_violations or self.upper_violations or self.lower_violations or self.bracket_violations or self.width_violations)

    @property
    def violations(self) -> tuple:
        return tuple(sorted(set(self.nesting_violations + self.upper_violations + self.lower_violations + self.bracket_violations + self.width_violations)))

    @property
    def final_bracket(self):
        if len(self.widths) == 0:
            return None
        return self.widths[-1]


def check_nesting(staircase_values: Sequence, n_max: int | None = None, tolerance=None) -> NestingEvidence:
    """Check P_m^(m+1)(z) <= F(z) <= P_(m+1)^(m+1)(z) along the staircase.

    ``staircase_values[n]`` is the n-th staircase approximant. Margins whose
    size is within ``tolerance`` (relative) are listed as ambiguous rather than
    judged.
    """
    values = list(staircase_values if n_max is None else staircase_values[: n_max + 1])
    nest, upper, lower, bracket, width_bad, ambiguous = [], [], [], [], [], []

    def judge(margin, scale, n, bucket, strict=True):
        verdict = _margin_ok(margin, scale, tolerance)
        if verdict == "ambiguous":
            ambiguous.append(n)
        elif verdict == "violation" or (strict and verdict == "equal"):
            bucket.append(n)

    for n in range(1, len(values)):
        v, prev = values[n], values[n - 1]
        if n % 2 == 0:
            # previous lower bound P_(m-1)^m below this upper bound P_m^m
            judge(v - prev, v, n - 1, nest, strict=False)
            if n >= 2:
                judge(values[n - 2] - v, v, n, upper)
        elif n >= 3:
            judge(v - values[n - 2], v, n, lower)
    widths = tuple(abs(values[n] - values[n - 1]) for n in range(1, len(values)))
    for n in range(2, len(values)):
        judge(widths[n - 2] - widths[n - 1], widths[n - 2], n, width_bad, strict=False)
    best = None
    if values:
        best_index = (len(values) - 1) // 2 * 2
        best = values[best_index]
        for n, v in enumerate(values):
            if n == best_index:
                continue
            margin = (v - best) if n % 2 == 0 else (best - v)
            judge(margin, best, n, bracket, strict=False)
    return NestingEvidence(tuple(nest), tuple(upper), tuple(lower), tuple(bracket), tuple(width_bad), tuple(sorted(set(ambiguous))), widths, best)


@dataclass(frozen=True)
class MonotonicityEvidence:
    """Values P_m^(m+j)(z) per j plus the cross inequality P_(m+1)^m >= P_m^(m+1)."""

    sequences: dict  # j -> list of (m, value)
    violations: tuple = ()  # (j, m) with the step from m-1 to m in the wrong direction
    cross_violations: tuple = ()  # m with P_(m+1)^m < P_m^(m+1)
    flat_steps: tuple = ()  # (j, m) with equal consecutive values

    @property
    def ok(self) -> bool:
        return not (self.violations or self.cross_violations)


def pade_family(coefficients, m_max: int, js: Iterable[int] = (-1, 0, 1)) -> dict:
    """Exact approximants [m+j/m] for the requested j and every m <= m_max that fits."""
    gammas = [rational(c) for c in (coefficients.shift_coefficients if isinstance(coefficients, PerturbationSeries) else coefficients)]
    family: dict = {}
    for j in js:
        for m in range(max(0, -j), m_max + 1):
            l = m + j
            if l + m + 1 > len(gammas):
                break
            family[(l, m)] = direct_pade(gammas, l, m, allow_singular=True)
    return family


def check_pade_monotonicity(coefficients, z, m_max: int = 40, js: Iterable[int] = (-1, 0, 1), approximants: dict | None = None) -> MonotonicityEvidence:
    """Exact check that {P_m^(m+j)(z)}_m decreases for even j and increases for odd j."""
    z = rational(z)
    if z <= 0:
        raise ValueError("monotonicity is only predicted for z > 0")
    js = tuple(js)
    family = approximants if approximants is not None else pade_family(coefficients, m_max, js)
    sequences: dict = {}
    bad, flat = [], []
    for j in js:
        seq = []
        for m in range(max(0, -j), m_max + 1):
            p = family.get((m + j, m))
            if p is None:
                break
            seq.append((m, p(z)))
        sequences[j] = seq
        for (m0, a), (m1, b) in zip(seq, seq[1:]):
            step = b - a if j % 2 else a - b
            if step < 0:
                bad.append((j, m1))
            elif step == 0:
                flat.append((j, m1))
    cross = []
    if -1 in sequences and 1 in sequences:
        minus = dict(sequences[-1])
        plus = dict(sequences[1])
        for m in sorted(plus):
            if m + 1 in minus and minus[m + 1] < plus[m]:
                cross.append(m)
    return MonotonicityEvidence(sequences, tuple(bad), tuple(cross), tuple(flat))


def hankel_determinant(moments: MomentView | Sequence, m: int, n: int) -> ExactRational:
    """Exact det[mu_(m+i+j)] for i, j = 0..n."""
    mus = moments.moments if isinstance(moments, MomentView) else tuple(rational(x) for x in moments)
    if m < 0 or n < 0:
        raise ValueError("m and n must be non-negative")
    if m + 2 * n >= len(mus):
        raise InsufficientMoments(f"D({m},{n}) needs mu_0..mu_{m + 2 * n}, have {len(mus)} moments")
    return fraction_free_det([[mus[m + i + j] for j in range(n + 1)] for i in range(n + 1)])


@dataclass(frozen=True)
class CarlemanEvidence:
    terms: tuple
    partial_sums: tuple
    term_slope: float  # d log(term_j) / d log j over the fit window
    sum_slope: float  # d log(S_J) / d log J over the fit window
    fit_window: tuple


def _slope(xs, ys) -> float:
    if len(xs) < 2:
        return float("nan")
    return statistics.linear_regression(xs, ys).slope


def carleman_partial_sums(moments: MomentView | Sequence, j_max: int, digits: int = 50, fit_window: tuple | None = None) -> CarlemanEvidence:
    """Partial sums of sum_(j>=1) mu_j^(-1/(2j)); growth is reported, never judged."""
    mus = moments.moments if isinstance(moments, MomentView) else tuple(rational(x) for x in moments)
    if j_max > len(mus) - 1:
        raise InsufficientMoments(f"j_max={j_max} needs {j_max + 1} moments")
    ctx = real_context(digits)
    terms, sums = [], []
    acc = ctx.zero
    for j in range(1, j_max + 1):
        mu = ctx.mpf(int(mus[j].numerator)) / int(mus[j].denominator)
        t = ctx.exp(-ctx.ln(mu) / (2 * j))
        acc += t
        terms.append(t)
        sums.append(acc)
    if fit_window is None:
        fit_window = (50, j_max) if j_max >= 100 else (max(1, j_max // 4), j_max)
    lo, hi = fit_window
    js = list(range(max(1, lo), min(hi, j_max) + 1))
    log_j = [math.log(j) for j in js]
    term_slope = _slope(log_j, [float(ctx.ln(terms[j - 1])) for j in js])
    sum_slope = _slope(log_j, [float(ctx.ln(sums[j - 1])) for j in js])
    return CarlemanEvidence(tuple(terms), tuple(sums), term_slope, sum_slope, (js[0], js[-1]) if js else (lo, hi))


@dataclass
class DiagnosticsReport:
    series_tag: str
    coupling: ExactRational
    sign_alternation: tuple  # () or (index,) of the first violation
    nesting: NestingEvidence
    monotonicity: MonotonicityEvidence
    hankel_results: dict  # (m, n) -> sign of D(m, n)
    carleman: CarlemanEvidence | None
    prediction_bound: object = None
    escalated: bool = False
    notes: list = field(default_factory=lambda: [HANKEL_NOTE])

    @property
    def nesting_violations(self) -> tuple:
        return self.nesting.violations

    @property
    def monotonicity_violations(self) -> tuple:
        return self.monotonicity.violations + tuple(("cross", m) for m in self.monotonicity.cross_violations)

    @property
    def carleman_partial_sums(self) -> tuple:
        return self.carleman.partial_sums if self.carleman else ()

    @property
    def verdict(self) -> dict:
        return {
            "sign_alternation": not self.sign_alternation,
            "nesting": not self.nesting.nesting_violations and not self.nesting.bracket_violations,
            "upper_bounds_decrease": not self.nesting.upper_violations,
            "lower_bounds_increase": not self.nesting.lower_violations,
            "bracket_width_shrinks": not self.nesting.width_violations,
            "pade_monotonicity": self.monotonicity.ok,
            "hankel_positive": all(s > 0 for s in self.hankel_results.values()),
            "prediction_bound": self.prediction_bound.ok if self.prediction_bound is not None else True,
        }

    @property
    def passed(self) -> bool:
        return all(self.verdict.values())


def hankel_sweep(moments: MomentView, n_max: int, offsets: Iterable[int] = (0, 1)) -> dict:
    """Signs of D(m, n) for the given offsets and n <= n_max (as far as moments allow)."""
    results = {}
    for m in offsets:
        for n in range(0, n_max + 1):
            if m + 2 * n >= len(moments):
                break
            d = hankel_determinant(moments, m, n)
            results[(m, n)] = (d > 0) - (d < 0)
    return results


def staircase_nesting(series, coupling, digits: int = 600, n_max: int | None = None) -> tuple[list, NestingEvidence, bool]:
    """Float staircase at ``coupling`` with exact recomputation if a margin is too thin to judge."""
    gammas = series.shift_coefficients if isinstance(series, PerturbationSeries) else [rational(c) for c in series]
    if n_max is None:
        n_max = len(gammas) - 1
    sums = partial_sums(gammas, coupling, n_max)
    table = epsilon_table(sums, digits)
    values = table.staircase_values()
    tol = real_context(digits).mpf(10) ** (-(digits // 2))
    evidence = check_nesting(values, tolerance=tol)
    escalated = False
    if evidence.ambiguous:
        top = min(n_max, max(evidence.ambiguous) + 1)
        exact_values = epsilon_table(sums[: top + 1]).staircase_values()
        merged = [coerce_like(v, values[0]) for v in exact_values] + values[top + 1 :]
        evidence = check_nesting(exact_values if top == n_max else merged)
        values = merged if top < n_max else exact_values
        escalated = True
    return values, evidence, escalated


def diagnose(
    series: PerturbationSeries,
    coupling,
    digits: int = 600,
    hankel_max: int = 20,
    monotonicity_m_max: int = 40,
    approximants: dict | None = None,
    predictions: bool = True,
) -> DiagnosticsReport:
    """Run every Stieltjes test on ``series`` at the coupling ``z`` of its shift series.

    For pt-cubic ``z`` is lambda^2, for quartic it is beta.
    """
    z = rational(coupling)
    gammas = list(series.shift_coefficients)
    try:
        moments = moment_view(series)
        sign_bad: tuple = ()
    except SignViolation as exc:
        moments = MomentView(tuple(g if i % 2 == 0 else -g for i, g in enumerate(gammas)))
        sign_bad = (exc.index,)
    _, nesting, escalated = staircase_nesting(gammas, z, digits)
    if z > 0:
        monotonicity = check_pade_monotonicity(gammas, z, monotonicity_m_max, approximants=approximants)
    else:
        monotonicity = MonotonicityEvidence({})
    hankel = hankel_sweep(moments, hankel_max)
    carleman = carleman_partial_sums(moments, len(moments) - 1) if len(moments) > 2 and not sign_bad else None
    bound = None
    if predictions and len(gammas) > 3:
        bound = check_prediction_bound(relative_error_table(gammas, digits=digits), moments)
    return DiagnosticsReport(series.hamiltonian.value, z, sign_bad, nesting, monotonicity, hankel, carleman, bound, escalated)
