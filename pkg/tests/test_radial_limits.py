from fractions import Fraction

import pytest

from mock_radial.errors import ClassificationError, DomainError
from mock_radial.exact_arith import Cusp, SpecParams, beta_orders, k_prime_of
from mock_radial.mock_core import CorrectionId
from mock_radial.radial_limits import (
    CaseTag,
    DEFAULT_T_GRID,
    classify,
    closed_form,
    curious_identity_odd,
    curious_identity_two_mod_four,
    default_grid,
    extrapolate,
    B_closed_form,
    numeric_radial_limit,
    reduced_cusps,
    shifted,
    sweep,
    verify,
    watson_closed_form,
    watson_radial_limit,
)

B_PARAMS = SpecParams("0/1", "1/2")
THIRD = SpecParams("1/3", "0/1")
SQRT3 = 3**0.5


class TestClassify:
    @pytest.mark.parametrize(
        "hk, tag",
        [
            ("0/1", CaseTag.DenominatorPole),
            ("1/3", CaseTag.DenominatorPole),
            ("1/4", CaseTag.EvenTerminating),
            ("3/8", CaseTag.EvenTerminating),
            ("1/2", CaseTag.ShiftedTerminating),
            ("5/6", CaseTag.ShiftedTerminating),
        ],
    )
    def test_B_trichotomy(self, hk, tag):
        assert classify(B_PARAMS, Cusp(hk)) is tag

    def test_shifted_pole(self):
        assert classify(SpecParams("0/1", "1/4"), Cusp("1/4")) is CaseTag.ShiftedPole

    def test_total_and_disjoint(self):
        for params in (B_PARAMS, THIRD, SpecParams("1/2", "1/4"), SpecParams("0/1", "1/4")):
            for c in reduced_cusps(12):
                tag = classify(params, c)
                assert isinstance(tag, CaseTag)

    def test_shift(self):
        p, c = shifted(B_PARAMS, Cusp("1/2"))
        assert c == Cusp("3/4")
        assert p.a_over_b == 0
        assert p.A_over_B == Fraction(1, 2)


class TestClosedForm:
    @pytest.mark.parametrize(
        "params, hk, value",
        [
            (B_PARAMS, "0/1", -0.5),
            (B_PARAMS, "1/3", 0.25 + 0.75 * SQRT3 * 1j),
            (B_PARAMS, "1/2", 0.5),
            (B_PARAMS, "1/4", 0.5j),
        ],
    )
    def test_oracles(self, params, hk, value):
        assert abs(closed_form(params, Cusp(hk)).constant_Q - value) < 1e-12

    def test_sum_of_terms(self):
        for c in reduced_cusps(12):
            r = closed_form(B_PARAMS, c)
            assert abs(r.constant_Q - sum(r.terms)) < 1e-12

    def test_term_count_bounded(self):
        for params in (B_PARAMS, THIRD, SpecParams("0/1", "1/4")):
            for c in reduced_cusps(12):
                r = closed_form(params, c)
                assert len(r.terms) <= 2 * params.B * c.k

    def test_even_terminating_numerator_vanishes(self):
        for params in (B_PARAMS, SpecParams("0/1", "1/4")):
            for c in reduced_cusps(24):
                if classify(params, c) is CaseTag.EvenTerminating:
                    kp = k_prime_of(c, params.B)
                    prof = beta_orders(c, params.B, 50)
                    assert all(prof[n] > 0 for n in range(kp // 2, 51))

    def test_matches_explicit_B_formulas(self):
        for c in reduced_cusps(16):
            assert abs(B_closed_form(c) - closed_form(B_PARAMS, c).constant_Q) < 1e-10

    def test_corrections_by_case(self):
        assert closed_form(B_PARAMS, Cusp("1/3")).correction is CorrectionId.MortensonT
        assert closed_form(B_PARAMS, Cusp("1/4")).correction is CorrectionId.None_
        assert closed_form(B_PARAMS, Cusp("1/2")).correction is CorrectionId.SmallT


class TestExtrapolation:
    def test_recovers_quadratic(self):
        grid = list(DEFAULT_T_GRID)
        value, err = extrapolate(grid, [1 + 2j + 3 * t - 5 * t * t for t in grid])
        assert abs(value - (1 + 2j)) < 1e-12
        assert err < 1e-10

    def test_grid_scales_with_k(self):
        g1 = default_grid(B_PARAMS, Cusp("0/1"))
        g3 = default_grid(B_PARAMS, Cusp("1/3"))
        assert g3[0] == pytest.approx(g1[0] / 9)


class TestNumeric:
    @pytest.mark.parametrize("hk", ["0/1", "1/3", "1/4", "1/2"])
    def test_B_examples(self, hk):
        report = verify(B_PARAMS, Cusp(hk))
        assert report.passed, report.abs_diff

    def test_wrong_correction_does_not_converge(self):
        report = verify(B_PARAMS, Cusp("1/3"), correction=CorrectionId.None_)
        assert not report.passed

    def test_third_family_regular_cusps(self):
        for hk in ("0/1", "1/3", "1/2", "1/4"):
            assert verify(THIRD, Cusp(hk)).passed

    @pytest.mark.xfail(strict=True, reason="correction leaves a t^(-1/2) term at cusps with even k'")
    def test_third_family_even_pole_cusp(self):
        assert verify(THIRD, Cusp("1/6")).passed

    @pytest.mark.xfail(strict=True, reason="correction leaves a t^(-1/2) term at every shifted-pole cusp")
    def test_shifted_pole(self):
        assert verify(SpecParams("0/1", "1/4"), Cusp("1/4")).passed


class TestCurious:
    @pytest.mark.parametrize("k", [1, 3, 5, 7, 9, 11, 13, 15])
    def test_odd(self, k):
        for h in range(k):
            if Fraction(h, k).denominator == k:
                assert curious_identity_odd(h, k)[2] < 1e-10

    @pytest.mark.parametrize("k", [2, 6, 10, 14])
    def test_two_mod_four(self, k):
        for h in range(k):
            if Fraction(h, k).denominator == k:
                assert curious_identity_two_mod_four(h, k)[2] < 1e-10


class TestWatson:
    def test_closed_forms(self):
        assert watson_closed_form(1, 1) == pytest.approx(4)
        assert watson_closed_form(1, 2) == pytest.approx(4j)

    @pytest.mark.parametrize("h, k, value", [(1, 1, 4), (1, 2, 4j)])
    def test_radial(self, h, k, value):
        assert abs(watson_radial_limit(h, k).value - value) < 1e-3


class TestSweep:
    def test_order_and_closed_forms(self):
        rows = sweep(B_PARAMS, 6, numeric=False)
        assert [r.cusp for r in rows] == reduced_cusps(6)
        assert all(r.status == "skipped" for r in rows)
        assert len({r.correction for r in rows}) <= 3

    def test_kmax_limit(self):
        with pytest.raises(DomainError):
            sweep(B_PARAMS, 25, numeric=False)

    def test_empty(self):
        assert sweep(B_PARAMS, 0, numeric=False) == []

    def test_parallel_matches_serial(self):
        a = sweep(B_PARAMS, 3, jobs=1)
        b = sweep(B_PARAMS, 3, jobs=2)
        assert a == b
        assert all(r.status == "pass" for r in a)

    def test_failed_hypotheses_reported_not_raised(self):
        rows = sweep(SpecParams("1/4", "1/2"), 4, numeric=False)
        status = {str(r.cusp.h_over_k): r.status for r in rows}
        assert status["1/3"] == "error:ClassificationError"
        assert status["1/4"] == "skipped"

    def test_singular_correction_reported(self):
        rows = sweep(SpecParams("1/4", "1/2"), 2)
        assert {r.status for r in rows} == {"error:ClassificationError", "error:InsufficientDataError"}
