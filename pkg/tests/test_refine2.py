from fractions import Fraction

import pytest

from curvebounds.classical import CurveParams, g2_threshold, ihara_trace, prime_powers
from curvebounds.errors import (
    BelowIharaRange,
    InvalidCut,
    NotPositiveDefinite,
    OutOfIharaRange,
    UncertifiedCut,
)
from curvebounds.qext import Quad
from curvebounds.refine2 import (
    AffineCut,
    RefineMatrix2,
    cut_from_matrix2,
    gain_asymptote,
    gain_at_4q,
    gain_cap_at_4q,
    general_bound,
    ihara_alpha,
    ihara_serre_trace,
    matrix_bound2,
    optimal_matrix2,
    serre_cut,
    serre_gain,
)


class TestGeneralBound:
    def test_serre_cut_recovers_weil_serre(self):
        for q, g in [(2, 5), (3, 10), (5, 4), (7, 9)]:
            from math import isqrt

            params = CurveParams(q, g)
            assert general_bound(params, serre_cut(q)) == -g * isqrt(4 * q)

    def test_matches_matrix_bound(self):
        params = CurveParams(5, 4)
        mat = RefineMatrix2(1, Fraction(7, 2), 13)
        cut = cut_from_matrix2(5, mat)
        assert cut.coeffs == (23, 7, 1)
        assert general_bound(params, cut) == matrix_bound2(params, mat)

    def test_weak_order1_cut(self):
        params = CurveParams(5, 4)
        cut = AffineCut((5, 1), certified=True)
        assert general_bound(params, cut) == -16

    def test_negative_coefficient_rejected(self):
        with pytest.raises(InvalidCut):
            general_bound(CurveParams(5, 4), AffineCut((3, -1, 2), certified=True))

    def test_zero_denominator_rejected(self):
        with pytest.raises(InvalidCut):
            general_bound(CurveParams(5, 4), AffineCut((3, 0, 0), certified=True))

    def test_uncertified_cut_rejected(self):
        with pytest.raises(UncertifiedCut):
            general_bound(CurveParams(5, 4), AffineCut((5, 1)))


class TestMatrixBound2:
    def test_optimal_matrix_for_5_4(self):
        params = CurveParams(5, 4)
        assert matrix_bound2(params, RefineMatrix2(1, Fraction(7, 2), 13)) == Fraction(-27, 2)
        assert optimal_matrix2(params) == RefineMatrix2(1, Fraction(7, 2), 13)

    def test_integer_a_never_improves(self):
        for q, g in [(2, 3), (3, 4), (5, 7), (9, 12), (23, 40)]:
            params = CurveParams(q, g)
            t_i = ihara_trace(params)
            for a in range(1, 12):
                bound = matrix_bound2(params, RefineMatrix2(1, Fraction(a), a * a + 1))
                assert Quad(bound) <= t_i

    def test_small_half_integer_weaker_than_optimal(self):
        params = CurveParams(3, 1)
        assert matrix_bound2(params, RefineMatrix2(1, Fraction(1, 2), 1)) == -6

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefinite):
            RefineMatrix2(1, Fraction(1), 1)  # det = 0
        with pytest.raises(NotPositiveDefinite):
            RefineMatrix2(1, Fraction(-1, 2), 1)
        with pytest.raises(NotPositiveDefinite):
            RefineMatrix2(0, Fraction(1, 2), 1)


class TestAlpha:
    def test_integer_alpha(self):
        assert ihara_alpha(CurveParams(5, 10)) == 3

    def test_family_4q(self):
        for q in (37, 41, 64):
            alpha = ihara_alpha(CurveParams(q, 4 * q))
            assert alpha == Quad(Fraction(-1, 2), Fraction(3, 2), q)

    def test_half_integer_case(self):
        assert ihara_alpha(CurveParams(64, 256)) == Fraction(23, 2)

    def test_below_range(self):
        with pytest.raises(BelowIharaRange):
            ihara_alpha(CurveParams(5, 1))


class TestIharaSerre:
    def test_q5_g4(self):
        params = CurveParams(5, 4)
        t = ihara_serre_trace(params)
        assert t == Fraction(-27, 2)
        assert (Quad(6) - t).floor() == 19

    def test_integer_alpha_recovers_order2(self):
        params = CurveParams(5, 10)
        assert ihara_serre_trace(params) == -30
        assert Quad(ihara_serre_trace(params)) == ihara_trace(params)

    def test_q11_g8_improves_floor_by_one(self):
        params = CurveParams(11, 8)
        n_ihara = (Quad(12) - ihara_trace(params)).floor()
        n_refined = (Quad(12) - ihara_serre_trace(params)).floor()
        assert n_refined == n_ihara - 1


class TestGain:
    def test_zero_when_alpha_integral(self):
        assert serre_gain(CurveParams(5, 10)) == 0

    def test_optimal_family_member(self):
        assert serre_gain(CurveParams(64, 256)) == Fraction(8, 3)

    def test_q5_g4_value(self):
        gain = serre_gain(CurveParams(5, 4))
        assert 0.1204 < float(gain) < 0.1206

    def test_identity_with_trace_difference(self):
        count = 0
        for q in prime_powers(2, 40):
            lo = g2_threshold(q).integer
            for g in range(lo, lo + 8):
                params = CurveParams(q, g)
                diff = Quad(ihara_serre_trace(params)) - ihara_trace(params)
                assert diff == serre_gain(params)
                count += 1
        assert count > 80

    def test_proof_identity_for_integer_a(self):
        for q, g in [(3, 5), (5, 8), (11, 20), (16, 29)]:
            params = CurveParams(q, g)
            alpha = ihara_alpha(params)
            t_i = ihara_trace(params)
            for a in range(1, 8):
                bound = matrix_bound2(params, RefineMatrix2(1, Fraction(a), a * a + 1))
                expected = g * (alpha - a) * (alpha - a) / (1 + 2 * a)
                assert t_i - bound == expected


class TestAsymptote:
    def test_q3_is_the_integral_exception(self):
        asym = gain_asymptote(3)
        assert asym.alpha_inf == 2
        assert asym.slope == 0
        assert asym.const_term == Fraction(1, 5)

    def test_q2(self):
        asym = gain_asymptote(2)
        assert asym.alpha_inf == Quad(Fraction(-1, 2), Fraction(1, 2), 17)
        assert asym.alpha_inf.floor() == 1

    def test_ceiling_consistency(self):
        for q in (2, 4, 16, 64, 256):
            asym = gain_asymptote(q)
            k = asym.alpha_inf.floor()
            assert k <= asym.alpha_inf < k + 1
            assert asym.aq_upper == asym.alpha_inf - asym.slope

    def test_slope_positive_unless_q3(self):
        for q in (2, 4, 5, 7, 9, 11, 13):
            asym = gain_asymptote(q)
            if q == 3:
                assert asym.slope == 0
            else:
                assert asym.slope.sign() > 0


class TestFamily4q:
    def test_optimal_members(self):
        assert gain_at_4q(64) == Fraction(8, 3)
        assert gain_at_4q(256) == Fraction(16, 3)

    def test_matches_general_gain(self):
        for q in prime_powers(34, 300):
            assert gain_at_4q(q) == serre_gain(CurveParams(q, 4 * q))

    def test_cap(self):
        for q in prime_powers(34, 300):
            assert gain_at_4q(q) <= gain_cap_at_4q(q)
        assert gain_cap_at_4q(64) == Fraction(8, 3)

    def test_out_of_range(self):
        with pytest.raises(OutOfIharaRange):
            gain_at_4q(32)
