"""Firm-value calculus for working-capital decisions.

Net working capital, free cash flow to firm, discounted value change of a
stream of cash-flow deltas, and ranking of alternative working-capital
strategies by the value they create.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InputError

ROUNDING_TOLERANCE = 0.01


def round_money(x: float) -> float:
    """Round to cents; used only at report boundaries."""
    return round(float(x), 2)


@dataclass(frozen=True)
class BalanceSheetSnapshot:
    current_assets: float
    current_liabilities: float
    receivables: float
    inventory: float
    cash: float
    payables: float

    def __post_init__(self):
        for name in ("current_assets", "current_liabilities", "receivables",
                     "inventory", "cash", "payables"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise InputError(f"{name} must be a finite non-negative amount, got {value!r}")
        parts = self.receivables + self.inventory + self.cash
        if abs(self.current_assets - parts) > ROUNDING_TOLERANCE:
            raise InputError(
                f"current_assets ({self.current_assets}) must equal receivables + "
                f"inventory + cash ({parts})"
            )

    @classmethod
    def from_components(cls, receivables, inventory, cash, payables, current_liabilities=None):
        """Build a snapshot whose totals are implied by its components."""
        if current_liabilities is None:
            current_liabilities = payables
        return cls(receivables + inventory + cash, current_liabilities,
                   receivables, inventory, cash, payables)

    @property
    def is_consistent(self) -> bool:
        """True when current liabilities consist of payables only."""
        return abs(self.current_liabilities - self.payables) <= ROUNDING_TOLERANCE


@dataclass(frozen=True)
class PeriodFinancials:
    cash_revenue: float
    fixed_costs: float
    variable_costs: float
    non_cash_expenses: float
    tax_rate: float
    nwc_growth: float = 0.0
    capex: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.tax_rate <= 1.0:
            raise InputError(f"tax_rate must lie in [0, 1], got {self.tax_rate!r}")
        if self.non_cash_expenses < 0:
            raise InputError("non_cash_expenses must be >= 0")

    def scaled(self, factor: float) -> "PeriodFinancials":
        """Every money field multiplied by ``factor``; the tax rate is kept."""
        return PeriodFinancials(
            self.cash_revenue * factor, self.fixed_costs * factor,
            self.variable_costs * factor, self.non_cash_expenses * factor,
            self.tax_rate, self.nwc_growth * factor, self.capex * factor,
        )


@dataclass(frozen=True)
class ValuationContext:
    """Discount rate plus either a finite horizon or ``horizon=None`` for perpetuity."""

    discount_rate: float
    horizon: int | None = None

    def __post_init__(self):
        if not self.discount_rate > 0:
            raise DomainError(f"discount_rate must be > 0, got {self.discount_rate!r}")
        if self.horizon is not None and self.horizon < 1:
            raise InputError(f"finite horizon must be >= 1, got {self.horizon!r}")

    @property
    def is_perpetuity(self) -> bool:
        return self.horizon is None

    @classmethod
    def perpetuity(cls, discount_rate: float) -> "ValuationContext":
        return cls(discount_rate, None)

    @classmethod
    def finite(cls, discount_rate: float, horizon: int) -> "ValuationContext":
        return cls(discount_rate, horizon)


@dataclass(frozen=True)
class StrategyVariant:
    label: str
    periods: tuple[PeriodFinancials, ...]
    discount_rate: float

    def __post_init__(self):
        object.__setattr__(self, "periods", tuple(self.periods))
        if not self.periods:
            raise InputError(f"variant {self.label!r} has no periods")
        if not self.discount_rate > 0:
            raise DomainError(f"variant {self.label!r}: discount_rate must be > 0")


def net_working_capital(b: BalanceSheetSnapshot) -> float:
    """Current assets less current liabilities."""
    return b.current_assets - b.current_liabilities


def net_working_capital_from_components(b: BalanceSheetSnapshot) -> float:
    """Receivables + inventory + cash - payables."""
    return b.receivables + b.inventory + b.cash - b.payables


def fcff(p: PeriodFinancials) -> float:
    """Free cash flow to firm for one period."""
    operating = p.cash_revenue - p.fixed_costs - p.variable_costs - p.non_cash_expenses
    return operating * (1.0 - p.tax_rate) + p.non_cash_expenses - p.nwc_growth - p.capex


def delta_value(cash_flow_deltas: Sequence[float], ctx: ValuationContext,
                time_zero: float = 0.0) -> float:
    """Present value of cash-flow changes.

    With a finite horizon ``cash_flow_deltas`` holds one delta per period
    t = 1..n, discounted by (1+k)^t. In perpetuity mode it holds exactly one
    level delta received every period forever (value ``level / k``).
    ``time_zero`` is added undiscounted in both modes.
    """
    deltas = np.asarray(cash_flow_deltas, dtype=float)
    k = ctx.discount_rate
    if ctx.is_perpetuity:
        if deltas.size != 1:
            raise InputError("perpetuity mode takes exactly one level delta")
        return time_zero + float(deltas[0]) / k
    if deltas.size == 0:
        raise InputError("finite horizon needs at least one delta")
    if deltas.size != ctx.horizon:
        raise InputError(f"expected {ctx.horizon} deltas, got {deltas.size}")
    t = np.arange(1, deltas.size + 1, dtype=float)
    # (1+k)^-t underflows to 0 gracefully for long horizons
    factors = np.exp(-t * math.log1p(k))
    return time_zero + float(np.dot(deltas, factors))


def variant_value(v: StrategyVariant) -> float:
    flows = [fcff(p) for p in v.periods]
    return delta_value(flows, ValuationContext.finite(v.discount_rate, len(flows)))


def compare_strategies(variants: Sequence[StrategyVariant]) -> list[tuple[str, float]]:
    """Rank strategy variants by discounted FCFF, best first.

    Ties go to the lower discount rate, then to the lexicographically smaller label.
    """
    variants = list(variants)
    if len(variants) < 2:
        raise InputError("need at least two variants to compare")
    horizons = {len(v.periods) for v in variants}
    if len(horizons) != 1:
        raise InputError(f"variants have misaligned horizons: {sorted(horizons)}")
    scored = [(variant_value(v), v.discount_rate, v.label) for v in variants]
    scored.sort(key=lambda item: (-item[0], item[1], item[2]))
    return [(label, value) for value, _, label in scored]
