import math
from fractions import Fraction

import pytest

from stargen.analytic import (
    TruncatedSeries,
    check_convolution_identity,
    check_multivariate_egf_identity,
    convolve_moments,
    density_polynomial,
    egf_moments,
    egf_polynomial,
    gaussian_moments,
    gue_egf,
    gue_moment_table,
    limit_law_egf,
    multivariate_egf,
)
from stargen.clt_engine import (
    CenteredStarGeneratorOracle,
    MomentTable,
    PartitionFunction,
    multivariate_limit_moments,
    pairing_sum,
)
from stargen.gue import gue_trace_moment

HALF = Fraction(1, 2)


def z(nvars=1, cap=8, index=1):
    return TruncatedSeries.variable(index, nvars, cap)


class TestSeriesArithmetic:
    def test_construction_enforces_cap(self):
        with pytest.raises(ValueError):
            TruncatedSeries(1, 3, {(4,): 1})
        with pytest.raises(ValueError):
            TruncatedSeries(2, 3, {(1,): 1})

    def test_addition_and_scalar(self):
        a = z() + z()
        assert a == 2 * z()
        assert (a - z()) == z()

    def test_multiplication_truncates(self):
        a = z(cap=3)
        cube = a * a * a
        assert cube.coefficient((3,)) == 1
        assert (cube * a).coefficient((3,)) == 0  # degree 4 falls off the cap
        assert cube * a == TruncatedSeries.zero(1, 3)

    def test_multivariate_product(self):
        a = z(nvars=2, cap=4, index=1)
        b = z(nvars=2, cap=4, index=2)
        prod = (a + b) * (a + b)
        assert prod.coefficient((2, 0)) == 1
        assert prod.coefficient((1, 1)) == 2
        assert prod.coefficient((0, 2)) == 1

    def test_exp_requires_zero_constant(self):
        with pytest.raises(ValueError):
            TruncatedSeries.one(1, 4).exp()

    def test_exp_matches_taylor_oracle(self):
        cap = 8
        a = TruncatedSeries(1, cap, {(2,): HALF})
        by_recursion = a.exp()
        by_taylor = TruncatedSeries.zero(1, cap)
        power = TruncatedSeries.one(1, cap)
        for j in range(cap + 1):
            by_taylor = by_taylor + power * Fraction(1, math.factorial(j))
            power = power * a
        assert by_recursion == by_taylor

    def test_exp_inverse(self):
        a = TruncatedSeries(2, 6, {(1, 0): 1, (0, 2): Fraction(-1, 3)})
        product = a.exp() * (-a).exp()
        assert product == TruncatedSeries.one(2, 6)

    def test_exp_of_sum_factorizes(self):
        a = TruncatedSeries(1, 6, {(1,): 1})
        b = TruncatedSeries(1, 6, {(2,): Fraction(1, 4)})
        assert (a + b).exp() == a.exp() * b.exp()


class TestEgfPolynomial:
    def test_degenerate(self):
        assert egf_polynomial(1) == TruncatedSeries.one(1, 12)

    def test_small_cases(self):
        p2 = egf_polynomial(2)
        assert p2.coefficient((0,)) == 1
        assert p2.coefficient((2,)) == Fraction(1, 4)
        p3 = egf_polynomial(3)
        assert p3.coefficient((2,)) == Fraction(1, 3)
        assert p3.coefficient((4,)) == Fraction(1, 54)

    def test_rejects_bad_dimension(self):
        with pytest.raises(ValueError):
            egf_polynomial(0)


class TestGueEgf:
    def test_low_moments_formulas(self):
        for d in range(1, 7):
            moments = egf_moments(gue_egf(d, cap=6), 6)
            assert moments[0] == 1
            assert moments[2] == 1
            assert moments[4] == 2 + Fraction(1, d * d)
            assert moments[6] == 5 + Fraction(10, d * d)

    def test_matches_wick_pipeline(self):
        for d in range(1, 6):
            moments = egf_moments(gue_egf(d, cap=12), 12)
            for k in range(13):
                assert moments[k] == gue_trace_moment(k, d)

    def test_constant_term(self):
        assert gue_egf(4).constant_term() == 1


class TestLimitLawEgf:
    def test_point_mass_at_one(self):
        series = limit_law_egf(1, cap=10)
        assert series == TruncatedSeries.one(1, 10)

    def test_second_moment_formula(self):
        for d in range(1, 7):
            assert egf_moments(limit_law_egf(d, cap=2), 2)[2] == 1 - Fraction(1, d * d)

    def test_small_moments_at_two(self):
        moments = egf_moments(limit_law_egf(2, cap=4), 4)
        assert moments[2] == Fraction(3, 4)
        assert moments[4] == Fraction(15, 16)

    def test_odd_moments_vanish(self):
        moments = egf_moments(limit_law_egf(3, cap=9), 9)
        assert all(moments[k] == 0 for k in (1, 3, 5, 7, 9))


class TestConvolution:
    def test_worked_fourth_moment(self):
        mu = egf_moments(limit_law_egf(2, cap=4), 4)
        gauss = gaussian_moments(Fraction(1, 4), 4)
        out = convolve_moments(mu, gauss, 4)
        assert out[4] == Fraction(15, 16) + 6 * Fraction(3, 4) * Fraction(1, 4) + Fraction(3, 16)
        assert out[4] == Fraction(9, 4) == gue_trace_moment(4, 2)

    def test_zero_variance_is_identity(self):
        mu = egf_moments(limit_law_egf(3, cap=8), 8)
        assert convolve_moments(mu, gaussian_moments(0, 8), 8) == mu

    def test_odd_moments_stay_zero(self):
        mu = egf_moments(limit_law_egf(3, cap=8), 8)
        out = convolve_moments(mu, gaussian_moments(Fraction(1, 9), 8), 8)
        assert all(out[k] == 0 for k in (1, 3, 5, 7))

    def test_identity_across_dimensions(self):
        for d in range(1, 6):
            assert check_convolution_identity(d, k_max=12)

    def test_short_sequences_rejected(self):
        with pytest.raises(ValueError):
            convolve_moments([1, 0], [1, 0], 4)


class TestDensity:
    def test_point_mass_rejected(self):
        with pytest.raises(ValueError):
            density_polynomial(1)

    def test_small_dimensions_reproduce_known_vectors(self):
        assert density_polynomial(2).coefficients == (0, 4)
        assert density_polynomial(3).coefficients == (
            Fraction(20, 32),
            Fraction(-108, 32),
            Fraction(243, 32),
        )
        assert density_polynomial(4).coefficients == (
            Fraction(405, 2187),
            Fraction(12960, 2187),
            Fraction(-36864, 2187),
            Fraction(32768, 2187),
        )

    def test_matching_variance(self):
        poly = density_polynomial(3)
        assert poly.variance == Fraction(2, 9)

    def test_mass_and_moment_matching(self):
        for d in (2, 3, 4, 5):
            poly = density_polynomial(d)
            target = egf_moments(limit_law_egf(d, cap=2 * d), 2 * d)
            gauss = gaussian_moments(poly.variance, 4 * d)
            for m in range(d):
                weighted = sum(
                    poly.coefficients[j] * gauss[2 * (m + j)] for j in range(d)
                )
                assert weighted == target[2 * m]

    def test_bare_kernel_rescaling(self):
        assert density_polynomial(2).gauss_kernel_coefficients() == (0, 8)
        # d - 1 = 4 is a perfect square, so d = 5 also rescales rationally
        poly5 = density_polynomial(5)
        assert poly5.gauss_kernel_coefficients() == tuple(
            Fraction(5, 2) * c for c in poly5.coefficients
        )
        with pytest.raises(ValueError):
            density_polynomial(3).gauss_kernel_coefficients()

    def test_density_evaluates(self):
        poly = density_polynomial(2)
        assert poly.density(0.0) == pytest.approx(0.0)
        assert poly.density(0.5) > 0
        assert poly.polynomial_value(HALF) == 1

    def test_numeric_mass_is_one(self):
        # crude trapezoid over a wide window; the tails are Gaussian
        for d in (2, 3, 4):
            poly = density_polynomial(d)
            step = 0.001
            total = sum(
                poly.density(-4 + i * step) * step for i in range(int(8 / step) + 1)
            )
            assert total == pytest.approx(1.0, abs=1e-4)


class TestMultivariateEgf:
    def build_table(self, r, cap, q=HALF):
        t = PartitionFunction(CenteredStarGeneratorOracle(q))
        return t, multivariate_limit_moments(t, r, cap)

    def test_univariate_reduction(self):
        t, table = self.build_table(1, 8)
        series = multivariate_egf(table, 8)
        assert series == limit_law_egf(2, cap=8)

    def test_mixed_coefficient_aggregates_both_orders(self):
        t, table = self.build_table(2, 4)
        series = multivariate_egf(table, 4)
        expected = (table[(1, 2)] + table[(2, 1)]) / 2
        assert series.coefficient((1, 1)) == expected

    def test_zero_table_gives_one(self):
        table = MomentTable(
            2, 2, {(): Fraction(1), (1,): Fraction(0), (2,): Fraction(0),
                   (1, 1): Fraction(0), (1, 2): Fraction(0),
                   (2, 1): Fraction(0), (2, 2): Fraction(0)}
        )
        assert multivariate_egf(table, 2) == TruncatedSeries.one(2, 2)

    def test_incomplete_table_rejected(self):
        table = MomentTable(2, 2, {(): Fraction(1), (1,): Fraction(0)})
        with pytest.raises(ValueError):
            multivariate_egf(table, 2)

    def test_substitution_into_univariate_series(self):
        # the r-variable e.g.f. is the univariate pairing-sum series composed
        # with z1**2 + ... + zr**2
        t, table = self.build_table(2, 6)
        series = multivariate_egf(table, 6)
        quadratic = TruncatedSeries(2, 6, {(2, 0): 1, (0, 2): 1})
        substituted = TruncatedSeries.zero(2, 6)
        power = TruncatedSeries.one(2, 6)
        for m in range(4):
            coeff = pairing_sum(t, m) / math.factorial(2 * m)
            substituted = substituted + power * coeff
            power = power * quadratic
        assert series == substituted


class TestMultivariateIdentity:
    def test_univariate_case(self):
        assert check_multivariate_egf_identity(1, 2, cap=8)

    def test_two_variables_small_cap(self):
        assert check_multivariate_egf_identity(2, 2, cap=6)

    def test_gue_table_matches_trace_moments(self):
        table = gue_moment_table(1, 3, 8)
        for k in range(9):
            assert table[(1,) * k] == gue_trace_moment(k, 3)
