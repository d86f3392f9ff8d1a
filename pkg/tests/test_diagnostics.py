import pytest
from gmpy2 import mpq

from padestieltjes import (
    InsufficientMoments,
    carleman_partial_sums,
    check_nesting,
    check_pade_monotonicity,
    diagnose,
    generate_pt_cubic,
    hankel_determinant,
    moment_view,
)
from padestieltjes.diagnostics import hankel_sweep, pade_family, staircase_nesting
from padestieltjes.numeric import real_context
from padestieltjes.oscillators import PerturbationSeries

LAMBDA_SQ = mpq(1, 49)
BETA = mpq(40, 49)


class TestNesting:
    def test_single_value_is_vacuous(self):
        ev = check_nesting([mpq(11)])
        assert ev.ok and ev.violations == ()

    def test_alternating_bounds(self):
        # upper, lower, upper, lower, ... closing in on 1
        values = [mpq(2), mpq(0), mpq(3, 2), mpq(1, 2), mpq(5, 4), mpq(3, 4), mpq(9, 8)]
        assert check_nesting(values).ok

    def test_detects_broken_upper_sequence(self):
        values = [mpq(2), mpq(0), mpq(5, 2), mpq(1, 2), mpq(9, 4)]
        ev = check_nesting(values)
        assert 2 in ev.upper_violations
        assert not ev.ok

    def test_detects_crossing(self):
        values = [mpq(2), mpq(0), mpq(3, 2), mpq(8, 5), mpq(5, 4)]
        ev = check_nesting(values)
        assert 3 in ev.nesting_violations or 3 in ev.bracket_violations

    def test_ambiguous_margins_are_not_judged(self):
        ctx = real_context(60)
        one = ctx.mpf(1)
        values = [one + ctx.mpf(10) ** -45, one, one + ctx.mpf(10) ** -46]
        ev = check_nesting(values, tolerance=ctx.mpf(10) ** -30)
        assert ev.ambiguous
        assert ev.ok

    @pytest.mark.parametrize("fixture_name, z", [("cubic", LAMBDA_SQ), ("quartic", BETA)])
    def test_full_staircase(self, request, fixture_name, z):
        series = request.getfixturevalue(fixture_name)
        values, ev, escalated = staircase_nesting(series, z, 600)
        assert ev.ok and not ev.ambiguous and not escalated
        assert len(values) == 193

    def test_quartic_final_bracket(self, quartic):
        _, ev, _ = staircase_nesting(quartic, BETA, 600)
        assert ev.final_bracket < 1e-13
        assert abs(ev.best - mpq(419249416033, 10**12)) < 1e-12

    def test_escalation_to_exact(self):
        # margins of 1e-40 are invisible at 60 digits with a 1e-30 tolerance
        eps = mpq(1, 10**40)
        gammas = [mpq(1), -eps, eps * eps]
        values, ev, escalated = staircase_nesting(gammas, mpq(1), 60)
        assert escalated
        assert ev.ok


@pytest.fixture(scope="module")
def cubic_family(cubic):
    return pade_family(cubic, 40)


class TestMonotonicity:
    def test_diagonal_decreases(self, cubic, cubic_family):
        ev = check_pade_monotonicity(cubic, LAMBDA_SQ, 40, approximants=cubic_family)
        diag = [v for _, v in ev.sequences[0]]
        assert len(diag) == 41
        assert all(b < a for a, b in zip(diag, diag[1:]))
        assert ev.ok and ev.flat_steps == ()

    def test_cross_inequality(self, cubic, cubic_family):
        ev = check_pade_monotonicity(cubic, LAMBDA_SQ, 40, approximants=cubic_family)
        assert ev.cross_violations == ()
        assert [m for m, _ in ev.sequences[-1]][0] == 1

    def test_constant_series(self):
        ev = check_pade_monotonicity([mpq(5)] + [mpq(0)] * 12, mpq(1, 3), 5)
        values = {v for seq in ev.sequences.values() for _, v in seq}
        assert values == {5}
        assert ev.ok and ev.flat_steps

    def test_geometric_series_is_flagged(self):
        # 1/(1 - z): [0/0] = 1 then every [m/m] = 2, an increase along j = 0
        ev = check_pade_monotonicity([mpq(1)] * 12, mpq(1, 2), 4)
        assert ev.violations == ((0, 1),)
        assert len(ev.flat_steps) > 0

    def test_detects_wrong_direction(self):
        # 1 + z is not a Stieltjes series: [1/1] = 1 + z exceeds [0/0] = 1 at z = 1/2
        ev = check_pade_monotonicity([mpq(1), mpq(1)] + [mpq(0)] * 6, mpq(1, 2), 2)
        assert (0, 1) in ev.violations
        assert not ev.ok

    def test_requires_positive_coupling(self, cubic):
        with pytest.raises(ValueError):
            check_pade_monotonicity(cubic, 0, 3)


class TestHankel:
    def test_one_by_one(self, cubic):
        mv = moment_view(cubic)
        for m in range(10):
            assert hankel_determinant(mv, m, 0) == mv[m]

    def test_two_by_two(self, cubic, quartic):
        assert hankel_determinant(moment_view(cubic), 0, 1) == 882296
        q = moment_view(quartic)
        assert hankel_determinant(q, 0, 1) == q[0] * q[2] - q[1] ** 2 > 0

    def test_insufficient(self):
        with pytest.raises(InsufficientMoments):
            hankel_determinant([1, 2, 3], 1, 1)

    @pytest.mark.parametrize("fixture_name", ["cubic", "quartic"])
    def test_positive_sweep(self, request, fixture_name):
        signs = hankel_sweep(moment_view(request.getfixturevalue(fixture_name)), 20)
        assert len(signs) == 42
        assert set(signs.values()) == {1}

    def test_non_stieltjes_moments(self):
        # 1, 1, 1/2 is not a moment sequence: D(0, 1) < 0
        assert hankel_determinant([1, 1, mpq(1, 2)], 0, 1) < 0


class TestCarleman:
    def test_first_term(self, cubic):
        ev = carleman_partial_sums(moment_view(cubic), 10)
        assert abs(ev.terms[0] - 930 ** -0.5) < 1e-12
        assert abs(ev.terms[0] - 0.032791) < 1e-6

    def test_increasing(self, cubic):
        ev = carleman_partial_sums(moment_view(cubic), 192)
        assert all(b > a for a, b in zip(ev.partial_sums, ev.partial_sums[1:]))

    @pytest.mark.parametrize("fixture_name", ["cubic", "quartic"])
    def test_term_decay_like_inverse_square_root(self, request, fixture_name):
        ev = carleman_partial_sums(moment_view(request.getfixturevalue(fixture_name)), 190, fit_window=(50, 190))
        assert abs(ev.term_slope + 0.5) < 0.05
        assert 0.5 < ev.sum_slope < 0.8

    def test_range(self):
        with pytest.raises(InsufficientMoments):
            carleman_partial_sums([1, 2], 2)


class TestReport:
    def test_sign_failure_is_reported(self):
        series = PerturbationSeries(generate_pt_cubic(6).hamiltonian, (mpq(1, 2), mpq(11), mpq(930), mpq(158836), mpq(5), mpq(7)))
        rep = diagnose(series, LAMBDA_SQ, digits=60, hankel_max=1, monotonicity_m_max=1)
        assert rep.sign_alternation == (1,)
        assert rep.verdict["sign_alternation"] is False
        assert not rep.passed

    def test_verdict_follows_evidence(self, cubic):
        short = cubic.truncated(40)
        rep = diagnose(short, LAMBDA_SQ, digits=100, hankel_max=5, monotonicity_m_max=10)
        assert rep.passed
        assert rep.nesting_violations == () and rep.monotonicity_violations == ()
        assert rep.carleman_partial_sums
        assert any("Hankel" in note for note in rep.notes)
