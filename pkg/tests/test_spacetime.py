from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rbc.spacetime import (GeometryError, ProtocolParams, SpacetimeEvent,
                           as_exact, exact_str, min_cross_delay, period,
                           round_site, round_window, spacelike, unveil_deadline)

from conftest import valid_params


class TestParams:
    def test_modulus_is_power_of_two(self):
        assert ProtocolParams(5, 1, 0, "0.01").modulus == 32

    def test_rejects_small_m(self):
        for bad in (1, 0, -3, 2.0, True):
            with pytest.raises((GeometryError, TypeError)):
                ProtocolParams(bad, 1, "0.005", "0.01")

    def test_rejects_negative_period(self):
        with pytest.raises(GeometryError):
            ProtocolParams(2, "0.01", "0.001", "0.005")

    def test_rejects_wide_tolerance(self):
        # 10*delta >= delta_x
        with pytest.raises(GeometryError):
            ProtocolParams(2, "1", "0.1", "0.01")

    def test_rejects_long_window(self):
        with pytest.raises(GeometryError):
            ProtocolParams(2, "1", "0.005", "0.1")

    def test_rejects_bad_intra_delay(self):
        with pytest.raises(GeometryError):
            ProtocolParams(2, "1", "0.005", "0.01", intra_delay="0.011")
        with pytest.raises(GeometryError):
            ProtocolParams(2, "1", "0.005", "0.01", intra_delay="-0.001")

    def test_intra_delay_defaults_to_delta(self):
        p = ProtocolParams(2, "1", "0.005", "0.01")
        assert p.intra_delay == Fraction("0.005")

    def test_float_inputs_are_exact(self):
        p = ProtocolParams(2, 0.1, 1e-5, 1e-4)
        assert p.delta_x == Fraction(1, 10)
        assert p.delta == Fraction(1, 100000)


class TestPeriod:
    def test_example_unit_separation(self):
        assert period(ProtocolParams(2, "1.0", "0.005", "0.01")) == Fraction("0.965")

    def test_example_tenth_second(self):
        p = ProtocolParams(2, "0.1", "0.00001", "0.0001")
        assert period(p) == Fraction("0.09977")

    @given(valid_params())
    def test_positive_and_below_cross_delay(self, p):
        assert 0 < period(p) < min_cross_delay(p)


class TestMinCrossDelay:
    def test_examples(self):
        assert min_cross_delay(ProtocolParams(2, "1.0", "0.005", "0.01")) == Fraction("0.99")
        assert min_cross_delay(ProtocolParams(2, "0.1", 0, "0.0001")) == Fraction("0.1")

    @given(valid_params())
    def test_below_separation_when_tolerant(self, p):
        if p.delta > 0:
            assert min_cross_delay(p) < p.delta_x
        else:
            assert min_cross_delay(p) == p.delta_x


class TestRoundWindow:
    def test_first_round(self, params_m2):
        dt, d = params_m2.delta_t, params_m2.delta
        assert round_window(params_m2, 1) == (0, dt, d + 2 * dt)

    def test_second_round(self, params_m2):
        t = params_m2.period
        dt, d = params_m2.delta_t, params_m2.delta
        assert round_window(params_m2, 2) == (t, t + dt, t + d + 2 * dt)

    def test_third_round_values(self, params_m2):
        assert round_window(params_m2, 3) == (
            Fraction("1.93"), Fraction("1.94"), Fraction("1.955"))

    @given(valid_params())
    def test_spacing_is_exactly_one_period(self, p):
        for k in (1, 2, 5):
            assert (round_window(p, k + 1)[0] - round_window(p, k)[0]) == period(p)

    @given(valid_params())
    def test_rounds_never_overlap(self, p):
        for k in (1, 2, 7):
            assert round_window(p, k)[2] < round_window(p, k + 1)[0]


class TestRoundSite:
    def test_examples(self):
        assert round_site(1) == 1
        assert round_site(2) == 2
        assert round_site(4) == 2

    def test_alternation(self):
        assert [round_site(k) for k in range(1, 7)] == [1, 2, 1, 2, 1, 2]

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            round_site(0)


class TestUnveilDeadline:
    def test_first_round(self, params_m2):
        assert unveil_deadline(params_m2, 1) == Fraction("0.99")

    def test_second_round(self, params_m2):
        assert unveil_deadline(params_m2, 2) == Fraction("1.955")

    @given(valid_params())
    def test_response_end_precedes_deadline(self, p):
        # delta + 2*delta_t < delta_x - 2*delta follows from T > 0.
        for r in (1, 2, 3, 6):
            assert round_window(p, r)[2] < unveil_deadline(p, r)


class TestSpacelike:
    def test_cross_site_inside_bound(self, params_m2):
        e1 = SpacetimeEvent(Fraction(0), 1)
        e2 = SpacetimeEvent(Fraction(1, 2), 2)
        assert spacelike(e1, e2, params_m2)

    def test_cross_site_outside_bound(self, params_m2):
        e1 = SpacetimeEvent(Fraction(0), 1)
        e2 = SpacetimeEvent(Fraction(3, 2), 2)
        assert not spacelike(e1, e2, params_m2)

    def test_same_site_never_spacelike(self, params_m2):
        e = SpacetimeEvent(Fraction(0), 1)
        assert not spacelike(e, e, params_m2)

    def test_boundary_is_strict(self, params_m2):
        e1 = SpacetimeEvent(Fraction(0), 1)
        e2 = SpacetimeEvent(min_cross_delay(params_m2), 2)
        assert not spacelike(e1, e2, params_m2)

    @given(valid_params())
    def test_symmetric(self, p):
        e1 = SpacetimeEvent(Fraction(1, 7), 1)
        e2 = SpacetimeEvent(Fraction(2, 3), 2)
        assert spacelike(e1, e2, p) == spacelike(e2, e1, p)


class TestSpacetimeEvent:
    def test_rejects_negative_time(self):
        with pytest.raises(ValueError):
            SpacetimeEvent(Fraction(-1), 1)

    def test_rejects_bad_site(self):
        with pytest.raises(ValueError):
            SpacetimeEvent(Fraction(0), 3)


class TestExactStr:
    @pytest.mark.parametrize("value,text", [
        (Fraction(5), "5"),
        (Fraction(-3), "-3"),
        (Fraction(193, 200), "0.965"),
        (Fraction(193, 100), "1.93"),
        (Fraction(1, 2), "0.5"),
        (Fraction(3, 8), "0.375"),
        (Fraction(1, 5), "0.2"),
        (Fraction(-1, 4), "-0.25"),
        (Fraction(1, 3), "1/3"),
        (Fraction(22, 7), "22/7"),
    ])
    def test_canonical_forms(self, value, text):
        assert exact_str(value) == text

    @given(num=st.integers(-10**6, 10**6), den=st.integers(1, 10**4))
    def test_round_trip(self, num, den):
        value = Fraction(num, den)
        text = exact_str(value)
        parsed = (Fraction(int(text.split("/")[0]), int(text.split("/")[1]))
                  if "/" in text else Fraction(text))
        assert parsed == value

    def test_as_exact_float_repr(self):
        assert as_exact(0.1) == Fraction(1, 10)
        assert as_exact("1e11") == Fraction(10) ** 11
