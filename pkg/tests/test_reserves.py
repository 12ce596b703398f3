import math
import warnings

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cashkit.errors import DegenerateDomainWarning, InputError, MixedBasisWarning
from cashkit.reserves import (
    LclInputs,
    SafetyStockInputs,
    ValueImpact,
    lcl,
    lcl_value_impact,
    log_argument,
    safety_stock,
)

CASE1 = dict(capital_rate_per_day=0.18 / 360, avg_transfer=27_250, flow_sum=817_477,
             daily_flow_stddev=35_466, cash_shortage_cost=5_000)


def direct_lcl(k, g, p, s, K):
    """Straight transcription of the closed form, kept separate from the library."""
    return math.sqrt(-2 * s ** 2 * math.log(k * g * s * math.sqrt(2 * math.pi) / (p * K)))


def test_lcl_case1():
    level = lcl(LclInputs(**CASE1))
    assert not level.degenerate
    assert level.value == pytest.approx(142_961.42, rel=1e-3)


def test_lcl_zero_volatility():
    assert lcl(LclInputs(**{**CASE1, "daily_flow_stddev": 0})).value == 0


def test_lcl_doubled_shortage_cost():
    base = lcl(LclInputs(**CASE1)).value
    doubled = lcl(LclInputs(**{**CASE1, "cash_shortage_cost": 10_000})).value
    assert doubled > 142_961.42 > base * 0.999
    expected = direct_lcl(0.18 / 360, 27_250, 817_477, 35_466, 10_000)
    assert doubled == pytest.approx(expected, rel=1e-12)


def test_lcl_degenerate_domain_flagged():
    with pytest.warns(DegenerateDomainWarning):
        level = lcl(LclInputs(1.0, 1e6, 10, 1000, 1))
    assert level.value == 0 and level.degenerate


def test_lcl_from_annual_matches_daily():
    a = lcl(LclInputs.from_annual(0.18, 27_250, 817_477, 35_466, 5_000))
    assert a == lcl(LclInputs(**CASE1))


def test_mixed_basis_warns():
    with pytest.warns(MixedBasisWarning):
        LclInputs(**CASE1, flow_period_days=30)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        LclInputs(**CASE1, flow_period_days=1)


@pytest.mark.parametrize("field", ["capital_rate_per_day", "avg_transfer", "flow_sum",
                                   "cash_shortage_cost"])
def test_lcl_rejects_non_positive(field):
    with pytest.raises(InputError):
        LclInputs(**{**CASE1, field: 0})


def test_lcl_rejects_negative_stddev():
    with pytest.raises(InputError):
        LclInputs(**{**CASE1, "daily_flow_stddev": -1})


def test_safety_stock_zero_volatility():
    assert safety_stock(SafetyStockInputs(0.1, 100, 2, 1000, 0, 50)).value == 0


def test_safety_stock_case1_mapping():
    inp = SafetyStockInputs(0.0005, 27_250, 1, 817_477, 35_466, 5_000)
    assert safety_stock(inp).value == pytest.approx(142_961.42, rel=1e-3)


def test_safety_stock_degenerate():
    # C*Q*s*v*sqrt(2pi) >= P*K
    inp = SafetyStockInputs(0.5, 100, 10, 100, 50, 1)
    with pytest.warns(DegenerateDomainWarning):
        level = safety_stock(inp)
    assert level == (0.0, True)


def test_safety_stock_rejects_non_positive():
    with pytest.raises(InputError):
        SafetyStockInputs(0, 100, 1, 100, 1, 1)


# -- value impact -------------------------------------------------------------------

def test_value_impact_case1():
    vi = lcl_value_impact(142_961.42, 0, 0.18, 0.2)
    assert vi.nwc_growth == pytest.approx(142_961.42, abs=1e-9)
    assert vi.yearly_alt_cost == pytest.approx(25_733, abs=1)
    assert vi.value_change == pytest.approx(-257_330, abs=5)


def test_value_impact_identity():
    assert lcl_value_impact(1000, 1000, 0.1, 0.3) == ValueImpact(0, 0, 0)


def test_value_impact_perpetuity_arithmetic():
    vi = lcl_value_impact(100_000, 50_000, 0.10, 0.0)
    assert vi.nwc_growth == 50_000
    assert vi.yearly_alt_cost == pytest.approx(5_000)
    # -50,000 - 5,000 / 0.10
    assert vi.value_change == pytest.approx(-100_000)


def test_value_impact_rejects_bad_tax():
    with pytest.raises(InputError):
        lcl_value_impact(1, 0, 0.1, 2)


@given(st.floats(0, 1e7), st.floats(1e-3, 1e7), st.floats(0.01, 1), st.floats(0, 1))
def test_raising_reserve_costs_value(old, increase, rate, tax):
    vi = lcl_value_impact(old + increase, old, rate, tax)
    assert vi.value_change < 0


# -- structural properties -------------------------------------------------------------

positive = st.floats(1e-3, 1e7)


@st.composite
def lcl_inputs(draw):
    return LclInputs(draw(st.floats(1e-6, 1e-2)), draw(positive), draw(positive),
                     draw(st.one_of(st.just(0.0), st.floats(1e-3, 1e6))), draw(positive))


@given(lcl_inputs())
def test_safety_stock_and_lcl_share_a_formula(inp):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateDomainWarning)
        a = lcl(inp)
        b = safety_stock(SafetyStockInputs(inp.capital_rate_per_day, inp.avg_transfer, 1,
                                           inp.flow_sum, inp.daily_flow_stddev,
                                           inp.cash_shortage_cost))
    assert a.degenerate == b.degenerate
    assert math.isclose(a.value, b.value, rel_tol=1e-9, abs_tol=0)


@given(lcl_inputs())
def test_radicand_matches_direct_formula(inp):
    s = inp.daily_flow_stddev
    arg = log_argument(inp.capital_rate_per_day * inp.avg_transfer, s, inp.flow_sum,
                       inp.cash_shortage_cost)
    assume(s > 0 and arg < 1)
    expected = direct_lcl(inp.capital_rate_per_day, inp.avg_transfer, inp.flow_sum, s,
                          inp.cash_shortage_cost)
    assert math.isclose(lcl(inp).value, expected, rel_tol=1e-9)


def test_lcl_vanishes_with_volatility():
    tiny = 1e-6 * CASE1["daily_flow_stddev"]
    assert lcl(LclInputs(**{**CASE1, "daily_flow_stddev": tiny})).value < 1
