"""Safety stock, precautionary cash level (LCL) and its value impact.

Both reserve formulas share one shape::

    level = sqrt(-2 s^2 ln(c * s * sqrt(2 pi) / (P * K)))

where ``c`` is the per-unit carrying cost of one replenishment (C*Q*v for
inventory, k*G* for cash). When the log argument reaches 1 the radicand is
non-positive: carrying a buffer costs more than the shortages it prevents,
so the level is clamped to zero and flagged as degenerate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DegenerateDomainWarning, InputError, MixedBasisWarning
from .valuation import ValuationContext, delta_value

DAY_COUNT = 360
SQRT_2PI = math.sqrt(2.0 * math.pi)


class ReserveLevel(NamedTuple):
    value: float
    degenerate: bool = False


@dataclass(frozen=True)
class SafetyStockInputs:
    holding_cost_rate: float
    order_quantity: float
    unit_price: float
    demand: float
    usage_stddev: float
    stockout_cost: float

    def __post_init__(self):
        for name in ("holding_cost_rate", "order_quantity", "unit_price", "demand", "stockout_cost"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if not self.usage_stddev >= 0:
            raise InputError("usage_stddev must be >= 0")


@dataclass(frozen=True)
class LclInputs:
    """Inputs of the precautionary cash level.

    ``capital_rate_per_day`` is the annual rate divided by the day-count
    basis. ``flow_period_days`` optionally records how many days ``flow_sum``
    covers; a value other than 1 means the rate and the flow total use
    different period bases, which is reproduced literally but warned about.
    """

    capital_rate_per_day: float
    avg_transfer: float
    flow_sum: float
    daily_flow_stddev: float
    cash_shortage_cost: float
    flow_period_days: float | None = None

    def __post_init__(self):
        for name in ("capital_rate_per_day", "avg_transfer", "flow_sum", "cash_shortage_cost"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if not self.daily_flow_stddev >= 0:
            raise InputError("daily_flow_stddev must be >= 0")
        if self.flow_period_days is not None and self.flow_period_days != 1:
            warnings.warn(
                f"rate is per day but flow_sum covers {self.flow_period_days} days",
                MixedBasisWarning, stacklevel=3,
            )

    @classmethod
    def from_annual(cls, annual_rate, avg_transfer, flow_sum, daily_flow_stddev,
                    cash_shortage_cost, basis=DAY_COUNT, flow_period_days=None):
        return cls(annual_rate / basis, avg_transfer, flow_sum, daily_flow_stddev,
                   cash_shortage_cost, flow_period_days)


@dataclass(frozen=True)
class ValueImpact:
    nwc_growth: float
    yearly_alt_cost: float
    value_change: float


def log_argument(unit_carry_cost: float, s: float, flow: float, shortage_cost: float) -> float:
    return unit_carry_cost * s * SQRT_2PI / (flow * shortage_cost)


def _buffer_level(unit_carry_cost, s, flow, shortage_cost) -> ReserveLevel:
    if s == 0:
        return ReserveLevel(0.0)
    arg = log_argument(unit_carry_cost, s, flow, shortage_cost)
    if arg >= 1.0:
        warnings.warn(f"log argument {arg:.6g} >= 1; reserve clamped to 0",
                      DegenerateDomainWarning, stacklevel=3)
        return ReserveLevel(0.0, True)
    return ReserveLevel(math.sqrt(-2.0 * s * s * math.log(arg)))


def safety_stock(inp: SafetyStockInputs) -> ReserveLevel:
    carry = inp.holding_cost_rate * inp.order_quantity * inp.unit_price
    return _buffer_level(carry, inp.usage_stddev, inp.demand, inp.stockout_cost)


def lcl(inp: LclInputs) -> ReserveLevel:
    """Precautionary (low) cash level."""
    return _buffer_level(inp.capital_rate_per_day * inp.avg_transfer,
                         inp.daily_flow_stddev, inp.flow_sum, inp.cash_shortage_cost)


def lcl_value_impact(lcl_new: float, lcl_old: float, annual_rate: float,
                     tax_rate: float) -> ValueImpact:
    """Value effect of moving the precautionary balance from ``lcl_old`` to ``lcl_new``.

    The extra cash is tied up once (a time-zero outflow) and carries an
    after-tax opportunity cost every year thereafter.
    """
    if not 0.0 <= tax_rate <= 1.0:
        raise InputError(f"tax_rate must lie in [0, 1], got {tax_rate!r}")
    ctx = ValuationContext.perpetuity(annual_rate)
    nwc_growth = lcl_new - lcl_old
    alt_cost = nwc_growth * annual_rate
    value = delta_value([-alt_cost * (1.0 - tax_rate)], ctx, time_zero=-nwc_growth)
    return ValueImpact(nwc_growth, alt_cost, value)
