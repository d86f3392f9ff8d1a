"""Pade prediction of series coefficients not used to build the approximant.

Writing eps_2k^(n) = f_(n+2k)(z) + z^(n+2k+1) phi_2k^(n)(z), the Taylor
coefficients of the transformation term ``phi`` estimate gamma_(n+2k+1),
gamma_(n+2k+2), ... . ``phi_series`` runs the full recursion in truncated
power-series arithmetic; ``first_prediction`` is its z = 0 specialisation and
only involves numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InsufficientCoefficients, ZeroConstantTerm, ZeroDenominator
from .numeric import TruncatedSeries, coerce_like, converter, rational
from .oscillators import MomentView, PerturbationSeries

DEFAULT_ORDER = 15


def _gammas(coefficients) -> list:
    if isinstance(coefficients, PerturbationSeries):
        return list(coefficients.shift_coefficients)
    return [rational(c) for c in coefficients]


@dataclass(frozen=True)
class PhiFunction:
    """Truncated expansion of phi_2k^(n); ``expansion[nu]`` predicts gamma_(n+2k+1+nu)."""

    n: int
    k: int
    expansion: TruncatedSeries

    @property
    def first_index(self) -> int:
        return self.n + 2 * self.k + 1

    @property
    def pade_degrees(self) -> tuple[int, int]:
        return self.k + self.n, self.k

    def coefficient(self, nu: int):
        return self.expansion[nu]

    def approximant_expansion(self, coefficients) -> TruncatedSeries:
        """Taylor coefficients of P_k^(k+n) implied by ``f_(n+2k) + z^(n+2k+1) phi``."""
        gammas = _gammas(coefficients)[: self.first_index]
        like = self.expansion[0]
        head = tuple(coerce_like(g, like) for g in gammas)
        return TruncatedSeries(head + tuple(self.expansion))


def phi_series(coefficients, n: int, k: int, order: int = DEFAULT_ORDER, digits: int | None = None) -> PhiFunction:
    """Expansion of the transformation term phi_2k^(n) through ``z**order``.

    phi_0 = 0, phi_2^(n) = gamma_(n+2)^2 / (gamma_(n+1) - gamma_(n+2) z), and
    phi_(2j+2)^(n) = phi_2j^(n+2) + alpha/beta with alpha, beta built from
    phi_2j^(n), phi_2j^(n+1) and phi_(2j-2)^(n+2). ``digits=None`` keeps every
    coefficient exact.
    """
    if n < 0 or k < 0 or order < 0:
        raise ValueError("n, k and order must be non-negative")
    raw = _gammas(coefficients)
    if len(raw) < n + 2 * k + 1:
        raise InsufficientCoefficients(f"phi_{2 * k}^({n}) needs gamma_0..gamma_{n + 2 * k}")
    conv = converter(digits)
    gam = [conv(g) for g in raw[: n + 2 * k + 1]]
    zero = conv(0)
    one = conv(1)
    zeros = TruncatedSeries((zero,) * (order + 1))
    if k == 0:
        return PhiFunction(n, 0, zeros)

    def const(v):
        return TruncatedSeries.constant(v, order)

    z_series = const(one).shift() if order > 0 else zeros
    phi: dict = {}
    for m in range(n, n + 2 * k + 1):
        phi[(0, m)] = zeros
    for m in range(n, n + 2 * (k - 1) + 1):
        denom = const(gam[m + 1]) - z_series * gam[m + 2]
        try:
            phi[(1, m)] = const(gam[m + 2] * gam[m + 2]) / denom
        except ZeroConstantTerm as exc:
            raise ZeroConstantTerm(f"degenerate Pade at n={m}, k=1") from exc
    for j in range(1, k):
        for m in range(n, n + 2 * (k - j - 1) + 1):
            try:
                phi[(j + 1, m)] = _phi_step(phi, gam, j, m, const, z_series)
            except ZeroConstantTerm as exc:
                raise ZeroConstantTerm(f"degenerate Pade at n={m}, k={j + 1}") from exc
    return PhiFunction(n, k, phi[(k, n)])


def _phi_step(phi: dict, gam: list, j: int, m: int, const, z_series: TruncatedSeries) -> TruncatedSeries:
    def delta(p):
        return phi[(j, p + 1)].shift() - phi[(j, p)]

    upper = const(gam[m + 2 * j + 2]) + delta(m + 1)
    lower = const(gam[m + 2 * j + 1]) + delta(m)
    cross = const(gam[m + 2 * j + 1]) + phi[(j, m + 1)].shift() - phi[(j - 1, m + 2)]
    alpha = upper / lower - upper / cross
    one = const(gam[0] * 0 + 1)
    beta = one / upper - z_series / lower + z_series / cross
    return phi[(j, m + 2)] + alpha / beta


@dataclass(frozen=True)
class PredictionRecord:
    """Prediction of gamma_target_index (the coefficient c_(target_index+1))."""

    target_index: int
    predicted: object
    truth: object = None
    relative_error: object = None
    pade_degrees: tuple = (0, 0)

    @property
    def series_index(self) -> int:
        return self.target_index + 1


def _record(target: int, predicted, gammas: Sequence, degrees) -> PredictionRecord:
    truth = gammas[target] if target < len(gammas) else None
    if truth is None:
        return PredictionRecord(target, predicted, None, None, degrees)
    t = coerce_like(truth, predicted)
    rel = (predicted - t) / t if t != 0 else None
    return PredictionRecord(target, predicted, truth, rel, degrees)


def predict_coefficients(phi: PhiFunction, count: int | None = None, coefficients=None) -> list[PredictionRecord]:
    """Predictions for gamma_(n+2k+1+nu), ``nu = 0..count-1``, with errors where the truth is known."""
    gammas = _gammas(coefficients) if coefficients is not None else []
    if count is None:
        count = len(phi.expansion)
    if count > len(phi.expansion):
        raise ValueError(f"phi expansion only has {len(phi.expansion)} coefficients")
    return [_record(phi.first_index + nu, phi.expansion[nu], gammas, phi.pade_degrees) for nu in range(count)]


# --------------------------------------------------------------------------
# First predictions (numbers only)


def first_prediction_table(coefficients, max_k: int | None = None, digits: int | None = 600, cells: Iterable | None = None) -> dict:
    """All g_2j^(m) = g_0^(m,2j) reachable from the given coefficients.

    Returns a dict keyed by ``(j, m)``; g_2j^(m) predicts gamma_(m+2j+1) and
    uses gamma_0..gamma_(m+2j). With ``cells`` only the listed targets (and
    what they depend on) are computed.
    """
    conv = converter(digits)
    gam = [conv(g) for g in _gammas(coefficients)]
    top = len(gam) - 1
    if max_k is None:
        max_k = top // 2
    needed = None
    if cells is not None:
        needed = set()
        for j, m in cells:
            for jj in range(0, j + 1):
                for mm in range(m, m + 2 * (j - jj) + 1):
                    needed.add((jj, mm))
    zero = conv(0)
    g: dict = {}
    for m in range(0, top + 1):
        g[(0, m)] = zero
    for m in range(0, top - 1):
        if needed is not None and (1, m) not in needed:
            continue
        if gam[m + 1] == 0:
            raise ZeroDenominator(m, 1)
        g[(1, m)] = gam[m + 2] * gam[m + 2] / gam[m + 1]
    for j in range(1, max_k):
        for m in range(0, top - 2 * j - 1):
            if needed is not None and (j + 1, m) not in needed:
                continue
            num = gam[m + 2 * j + 2] - g[(j, m + 1)]
            num = num * num
            d1 = gam[m + 2 * j + 1] - g[(j, m)]
            d2 = gam[m + 2 * j + 1] - g[(j - 1, m + 2)]
            if d1 == 0 or d2 == 0:
                raise ZeroDenominator(m, j + 1)
            g[(j + 1, m)] = g[(j, m + 2)] + num / d1 - num / d2
    return g


def first_prediction(coefficients, n: int, k: int, digits: int | None = 600):
    """g_2k^(n): the prediction for gamma_(n+2k+1) from gamma_0..gamma_(n+2k)."""
    gammas = _gammas(coefficients)
    if len(gammas) < n + 2 * k + 1:
        raise InsufficientCoefficients(f"g_{2 * k}^({n}) needs gamma_0..gamma_{n + 2 * k}")
    if k == 0:
        return converter(digits)(0)
    table = first_prediction_table(gammas[: n + 2 * k + 1], max_k=k, digits=digits, cells=[(k, n)])
    return table[(k, n)]


def relative_error_table(series, n_range: Iterable[int] | None = None, digits: int | None = 600) -> list[PredictionRecord]:
    """Staircase first predictions and their relative errors.

    For row n the approximant is eps_(2[n/2])^(n-2[n/2]), built from
    gamma_0..gamma_n, and it predicts gamma_(n+1) (the coefficient c_(n+2)).
    """
    gammas = _gammas(series)
    last = len(gammas) - 2
    rows = list(range(2, last + 1) if n_range is None else n_range)
    if any(n > last for n in rows):
        raise InsufficientCoefficients(f"rows beyond n={last} need more coefficients")
    if any(n < 0 for n in rows):
        raise ValueError("rows must be non-negative")
    table = first_prediction_table(gammas[: max(rows) + 2], digits=digits)
    records = []
    for n in rows:
        j, m = n // 2, n % 2
        records.append(_record(n + 1, table[(j, m)], gammas, (j + m, j)))
    return records


@dataclass(frozen=True)
class BoundEvidence:
    """Outcome of 0 <= mu_t^[l/m] <= mu_t for each predicted moment."""

    checked: tuple
    violations: tuple
    not_applicable: tuple = ()
    fitted_window_equalities: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def check_prediction_bound(predictions: Iterable[PredictionRecord], moments: MomentView) -> BoundEvidence:
    """Compare predicted moments with true moments; only ``l >= m - 1`` approximants are judged."""
    checked, violations, skipped, equal = [], [], [], []
    for rec in predictions:
        t = rec.target_index
        l, m = rec.pade_degrees
        if l < m - 1 or t >= len(moments):
            skipped.append(t)
            continue
        predicted_moment = rec.predicted if t % 2 == 0 else -rec.predicted
        mu = coerce_like(moments[t], predicted_moment)
        checked.append(t)
        if predicted_moment < 0 or predicted_moment > mu:
            violations.append(t)
        if t <= l + m and predicted_moment == mu:
            equal.append(t)
    return BoundEvidence(tuple(checked), tuple(violations), tuple(skipped), tuple(equal))
