import time
from fractions import Fraction

import pytest
from gmpy2 import mpq

import oracles
from padestieltjes import (
    Hamiltonian,
    MomentView,
    PerturbationSeries,
    SignViolation,
    asymptotic_ratio,
    asymptotic_reference,
    generate,
    generate_pt_cubic,
    generate_quartic,
    map_coupling,
    moment_view,
    partial_sums,
)
from padestieltjes.oscillators import denominator_odd_part
from reference_values import CUBIC_FIRST_TEN, SUMMATION_ROWS
from printed import matches_printed


def as_fraction(q):
    return Fraction(int(q.numerator), int(q.denominator))


class TestCubic:
    def test_first_ten(self):
        start = time.perf_counter()
        series = generate_pt_cubic(10)
        assert time.perf_counter() - start < 1.0
        assert [series[n] for n in range(1, 11)] == [CUBIC_FIRST_TEN[n] for n in range(1, 11)]
        assert series.unperturbed_energy == mpq(1, 2)

    @pytest.mark.parametrize("order, value", [(1, 11), (2, -930), (10, -274145574452876905074540)])
    def test_single_orders(self, order, value):
        assert generate_pt_cubic(order)[order] == value

    def test_matches_dense_oracle(self):
        assert [as_fraction(c) for c in generate_pt_cubic(14).shift_coefficients] == oracles.cubic_coefficients(14)

    def test_integers_and_signs(self, cubic):
        assert cubic.max_order == 193
        for n in range(1, 194):
            c = cubic[n]
            assert c.denominator == 1
            assert (c > 0) == (n % 2 == 1)

    def test_degree_of_last_wavefunction_level(self, cubic):
        # two wavefunction orders per energy coefficient, degree 3k at level k
        assert cubic.wavefunction_degree == 3 * 2 * 193

    def test_prefix_stability(self, cubic):
        for order in (0, 1, 10, 57):
            assert generate_pt_cubic(order).coefficients == cubic.coefficients[: order + 1]

    def test_order_zero(self):
        series = generate_pt_cubic(0)
        assert series.max_order == 0 and series.shift_coefficients == ()


class TestQuartic:
    def test_low_orders(self):
        series = generate_quartic(4)
        assert series.shift_coefficients == (mpq(3, 4), mpq(-21, 16), mpq(333, 64), mpq(-30885, 1024))
        assert series.unperturbed_energy == 1

    def test_second_coefficient_from_partial_sum(self):
        # 3/4 + B_2 * 40/49 reproduces the printed sigma_1
        sigma_1 = mpq(3, 4) + generate_quartic(2)[2] * mpq(40, 49)
        assert matches_printed(sigma_1, SUMMATION_ROWS[1][3])

    def test_matches_dense_oracle(self):
        assert [as_fraction(c) for c in generate_quartic(16).shift_coefficients] == oracles.quartic_coefficients(16)

    def test_signs_and_denominators(self, quartic):
        assert quartic.max_order == 193
        for n in range(1, 194):
            assert (quartic[n] > 0) == (n % 2 == 1)
        assert denominator_odd_part(quartic) == 1
        assert quartic.metadata["denominator_odd_part"] == 1

    def test_attained_degree(self, quartic):
        assert quartic.wavefunction_degree == 4 * 193

    def test_prefix_stability(self, quartic):
        assert generate_quartic(25).coefficients == quartic.coefficients[:26]


class TestAsymptotics:
    @pytest.mark.parametrize("tag", ["pt-cubic", "quartic"])
    @pytest.mark.parametrize("n", [1, 2, 7, 50, 193])
    def test_reference_matches_gamma_oracle(self, tag, n):
        ours = asymptotic_reference(tag, n, digits=60)
        expected = oracles.asymptotic_value(tag, n, dps=70)
        assert abs(ours / expected - 1) < 1e-50

    def test_first_value(self):
        ref = asymptotic_reference("pt-cubic", 1)
        assert abs(ref - 26.15) < 0.01
        assert abs(11 / ref - 0.4206) < 1e-4

    @pytest.mark.parametrize("fixture_name", ["cubic", "quartic"])
    def test_ratio_below_one_and_rising(self, request, fixture_name):
        series = request.getfixturevalue(fixture_name)
        ratios = [asymptotic_ratio(series, n) for n in range(1, 194)]
        assert all(0 < r < 1 for r in ratios)
        tail = ratios[49:]
        assert all(b > a for a, b in zip(tail, tail[1:]))
        assert ratios[149] > ratios[9]

    def test_calibrated_threshold(self, cubic):
        ratios = {n: float(asymptotic_ratio(cubic, n)) for n in (10, 50, 100, 193)}
        assert ratios[10] == pytest.approx(0.8134, abs=1e-4)
        assert ratios[100] == pytest.approx(0.9857, abs=1e-4)
        assert ratios[193] == pytest.approx(0.9926, abs=1e-4)

    def test_invalid_index(self):
        with pytest.raises(ValueError):
            asymptotic_reference("pt-cubic", 0)


class TestCouplingAndMoments:
    @pytest.mark.parametrize("lam, beta", [("1/7", mpq(40, 49)), (0, mpq(0)), (1, mpq(40)), ("1/2", mpq(10))])
    def test_map(self, lam, beta):
        assert map_coupling(lam) == beta

    def test_cubic_moments(self):
        mv = moment_view(generate_pt_cubic(3))
        assert mv.moments == (11, 930, 158836)

    def test_quartic_moment(self):
        assert moment_view(generate_quartic(1))[0] == mpq(3, 4)

    def test_single_term(self):
        assert moment_view([5]).moments == (5,)

    def test_sign_violation(self):
        with pytest.raises(SignViolation) as info:
            moment_view([11, -930, -5])
        assert info.value.index == 2

    def test_partial_sums_dominate(self, cubic, quartic):
        s = partial_sums(cubic, mpq(1, 49), 192)
        sigma = partial_sums(quartic, mpq(40, 49), 192)
        assert all(abs(a) > abs(b) for a, b in zip(s, sigma))

    def test_hamiltonian_parsing(self):
        assert Hamiltonian.parse("PT_CUBIC") is Hamiltonian.PT_CUBIC
        assert Hamiltonian.parse("quartic") is Hamiltonian.QUARTIC
        assert generate("quartic", 2).hamiltonian is Hamiltonian.QUARTIC
        with pytest.raises(ValueError):
            Hamiltonian.parse("sextic")

    def test_truncated(self, cubic):
        short = cubic.truncated(5)
        assert isinstance(short, PerturbationSeries) and short.max_order == 5
        with pytest.raises(ValueError):
            short.truncated(6)
        assert isinstance(moment_view(short), MomentView)
