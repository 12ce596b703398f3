"""One-day option value of holding speculative cash.

Holding cash lets the firm buy an asset (typically foreign currency) if its
price dips below its long-term value tomorrow. In a one-step binomial model
the dip is one daily standard deviation; on an up-move the firm simply does
not buy, so that branch is worth nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError

DAY_COUNT = 360


@dataclass(frozen=True)
class SpeculativeInputs:
    units: float
    price: float
    daily_price_stddev: float
    annual_rate: float
    up_probability: float = 0.5
    day_count: int = DAY_COUNT

    def __post_init__(self):
        if not self.units > 0:
            raise InputError("units must be > 0")
        if not self.price > 0:
            raise InputError("price must be > 0")
        if not self.daily_price_stddev >= 0:
            raise InputError("daily_price_stddev must be >= 0")
        if not 0.0 <= self.up_probability <= 1.0:
            raise InputError("up_probability must lie in [0, 1]")
        if not self.annual_rate >= 0:
            raise InputError("annual_rate must be >= 0")
        if not self.day_count > 0:
            raise InputError("day_count must be > 0")

    @property
    def daily_rate(self) -> float:
        return self.annual_rate / self.day_count

    @property
    def down_probability(self) -> float:
        return 1.0 - self.up_probability


@dataclass(frozen=True)
class SpeculativeVerdict:
    expected_benefit: float
    daily_cost: float
    hold: bool


def expected_benefit(inp: SpeculativeInputs) -> float:
    """Probability-weighted, one-day-discounted gain from holding cash."""
    down_payoff = inp.daily_price_stddev * inp.price * inp.units / (1.0 + inp.daily_rate)
    up_payoff = 0.0
    return inp.down_probability * down_payoff + inp.up_probability * up_payoff


def daily_capital_cost(units: float, price: float, annual_rate: float,
                       day_count: int = DAY_COUNT) -> float:
    return annual_rate / day_count * units * price


def speculative_verdict(inp: SpeculativeInputs) -> SpeculativeVerdict:
    benefit = expected_benefit(inp)
    cost = daily_capital_cost(inp.units, inp.price, inp.annual_rate, inp.day_count)
    return SpeculativeVerdict(benefit, cost, benefit > cost)


def breakeven_stddev(inp: SpeculativeInputs) -> float:
    """Daily price volatility at which the benefit exactly equals the cost.

    Returns ``inf`` when the down-move probability is zero.
    """
    if inp.down_probability == 0:
        return float("inf")
    cost = daily_capital_cost(inp.units, inp.price, inp.annual_rate, inp.day_count)
    return cost * (1.0 + inp.daily_rate) / (inp.down_probability * inp.price * inp.units)
