"""Cash-balance control models: Baumol, Beranek, Miller-Orr and Stone.

Each model has a parameter calculator and a pure step function. Step
functions take the observed state and return a :class:`PolicyAction`; the
caller (usually :mod:`cashkit.simulator`) owns the balance.

Closed forms used:

* Baumol / Beranek: C* = sqrt(2 F P / k), average balance C*/2,
  P / C* transfers per period.
* Miller-Orr: target = L + (3 F sigma^2 / (4 k))^(1/3), upper = 3 target - 2 L,
  with sigma^2 the variance of daily net operating flows before any action.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InputError

DEFAULT_INNER_FRACTION = 0.8
DEFAULT_LOOKAHEAD_DAYS = 5


class ActionKind(str, enum.Enum):
    NONE = "none"
    TO_CASH = "transfer_to_cash"
    FROM_CASH = "transfer_from_cash"


@dataclass(frozen=True)
class PolicyAction:
    kind: ActionKind
    amount: float
    resulting_balance: float

    def __post_init__(self):
        if self.amount < 0:
            raise InputError("action amount must be >= 0")
        if self.kind is ActionKind.NONE and self.amount != 0:
            raise InputError("a 'none' action cannot move money")

    @property
    def signed_amount(self) -> float:
        """Change in cash caused by the action."""
        if self.kind is ActionKind.TO_CASH:
            return self.amount
        if self.kind is ActionKind.FROM_CASH:
            return -self.amount
        return 0.0

    @property
    def fired(self) -> bool:
        return self.kind is not ActionKind.NONE


def no_action(balance: float) -> PolicyAction:
    return PolicyAction(ActionKind.NONE, 0.0, balance)


def _require_positive(**values):
    for name, v in values.items():
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise InputError(f"{name} must be a finite value > 0, got {v!r}")


# -- Baumol / Beranek ---------------------------------------------------------

@dataclass(frozen=True)
class BaumolParams:
    period_demand: float
    transfer_cost: float
    rate: float

    def __post_init__(self):
        _require_positive(period_demand=self.period_demand,
                          transfer_cost=self.transfer_cost, rate=self.rate)


@dataclass(frozen=True)
class BaumolSolution:
    optimal_cash: float
    transfers_per_period: float
    avg_balance: float

    @property
    def transfer_size(self) -> float:
        return self.optimal_cash


def baumol_cost(c: float, p: BaumolParams) -> float:
    """Transfer cost plus opportunity cost of holding transfer size ``c``."""
    return p.transfer_cost * p.period_demand / c + p.rate * c / 2.0


def baumol_optimal(p: BaumolParams) -> BaumolSolution:
    c_star = math.sqrt(2.0 * p.transfer_cost * p.period_demand / p.rate)
    return BaumolSolution(c_star, p.period_demand / c_star, c_star / 2.0)


def beranek_optimal(p: BaumolParams) -> BaumolSolution:
    """Sweep size for an inflow-dominated firm; ``period_demand`` is the period's total inflow."""
    return baumol_optimal(p)


def baumol_step(state_balance: float, daily_outflow: float, c_star: float) -> PolicyAction:
    """Refill by ``c_star`` when today's outflow would exhaust the balance.

    If a single outflow exceeds ``c_star`` the refill is the smallest multiple
    of ``c_star`` that keeps the balance positive.
    """
    _require_positive(c_star=c_star)
    after = state_balance - daily_outflow
    if after > 0:
        return no_action(after)
    n = max(1, math.floor(-after / c_star) + 1)
    amount = n * c_star
    return PolicyAction(ActionKind.TO_CASH, amount, after + amount)


def beranek_step(state_balance: float, daily_inflow: float, c_star: float) -> PolicyAction:
    """Sweep the whole balance into securities once it reaches ``c_star``."""
    _require_positive(c_star=c_star)
    after = state_balance + daily_inflow
    if after >= c_star:
        return PolicyAction(ActionKind.FROM_CASH, after, 0.0)
    return no_action(after)


# -- Miller-Orr -------------------------------------------------------------

@dataclass(frozen=True)
class MillerOrrParams:
    lower_limit: float
    transfer_cost: float
    daily_rate: float
    daily_variance: float

    def __post_init__(self):
        _require_positive(transfer_cost=self.transfer_cost, daily_rate=self.daily_rate)
        if not self.lower_limit >= 0:
            raise InputError("lower_limit must be >= 0")
        # zero variance is allowed: the band collapses onto L
        if not self.daily_variance >= 0:
            raise InputError("daily_variance must be >= 0")


@dataclass(frozen=True)
class MillerOrrLevels:
    lower: float
    target: float
    upper: float

    def __post_init__(self):
        # 3*target - 2*L may round a few ulps below target when the spread vanishes
        slack = 1e-12 * max(abs(self.lower), abs(self.upper), 1.0)
        if not (self.lower <= self.target + slack and self.target <= self.upper + slack):
            raise InputError(f"need lower <= target <= upper, got {self}")

    @property
    def spread(self) -> float:
        return self.target - self.lower


def miller_orr_spread(p: MillerOrrParams) -> float:
    return (3.0 * p.transfer_cost * p.daily_variance / (4.0 * p.daily_rate)) ** (1.0 / 3.0)


def miller_orr_levels(p: MillerOrrParams) -> MillerOrrLevels:
    z = miller_orr_spread(p)
    if z == 0.0:
        # 3L - 2L need not round back to L; the collapsed band is exact
        return MillerOrrLevels(p.lower_limit, p.lower_limit, p.lower_limit)
    target = p.lower_limit + z
    return MillerOrrLevels(p.lower_limit, target, 3.0 * target - 2.0 * p.lower_limit)


def miller_orr_step(balance: float, levels: MillerOrrLevels) -> PolicyAction:
    """Return to target when the balance touches either control limit."""
    if balance == levels.target:
        return no_action(balance)
    if balance >= levels.upper:
        return PolicyAction(ActionKind.FROM_CASH, balance - levels.target, levels.target)
    if balance <= levels.lower:
        return PolicyAction(ActionKind.TO_CASH, levels.target - balance, levels.target)
    return no_action(balance)


# -- Stone ------------------------------------------------------------------

@dataclass(frozen=True)
class StoneParams:
    """Outer (H0, H1) and inner control limits around a Miller-Orr target.

    ``lookahead_days = 0`` with inner limits equal to the outer ones reduces
    the policy to plain Miller-Orr.
    """

    miller_orr: MillerOrrParams
    outer_upper: float
    outer_lower: float
    inner_upper: float
    inner_lower: float
    lookahead_days: int = DEFAULT_LOOKAHEAD_DAYS
    target: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "target", miller_orr_levels(self.miller_orr).target)
        chain = (self.outer_lower, self.inner_lower, self.target, self.inner_upper, self.outer_upper)
        slack = 1e-12 * max(max(abs(x) for x in chain), 1.0)
        if any(a > b + slack for a, b in zip(chain, chain[1:])):
            raise InputError(
                "need H0 <= inner_lower <= target <= inner_upper <= H1, got "
                + " <= ".join(f"{x:g}" for x in chain)
            )
        if self.lookahead_days < 0:
            raise InputError("lookahead_days must be >= 0")

    @classmethod
    def from_miller_orr(cls, mo: MillerOrrParams, inner_fraction=DEFAULT_INNER_FRACTION,
                        lookahead_days=DEFAULT_LOOKAHEAD_DAYS) -> "StoneParams":
        """Outer limits = Miller-Orr (L, U*); inner limits = the band shrunk
        about its midpoint to ``inner_fraction`` of its half-width."""
        if not 0.0 <= inner_fraction <= 1.0:
            raise InputError("inner_fraction must lie in [0, 1]")
        lv = miller_orr_levels(mo)
        mid = (lv.lower + lv.upper) / 2.0
        half = (lv.upper - lv.lower) / 2.0
        inner_lo = max(mid - inner_fraction * half, lv.lower)
        inner_hi = min(mid + inner_fraction * half, lv.upper)
        # inner band must still contain the target
        inner_lo = min(inner_lo, lv.target)
        inner_hi = max(inner_hi, lv.target)
        return cls(mo, lv.upper, lv.lower, inner_hi, inner_lo, lookahead_days)

    def levels(self) -> MillerOrrLevels:
        return MillerOrrLevels(self.outer_lower, self.target, self.outer_upper)


def stone_projection(balance: float, p: StoneParams, forecast_next_n: Sequence[float]) -> float:
    n = p.lookahead_days
    if len(forecast_next_n) < n:
        raise InputError(f"forecast has {len(forecast_next_n)} values, need {n}")
    return balance + math.fsum(forecast_next_n[:n])


def stone_step(balance: float, p: StoneParams, forecast_next_n: Sequence[float]) -> PolicyAction:
    """Act only if the projected balance n days ahead still breaches an inner limit.

    The projection is recomputed at every outer-limit touch. Touching an inner
    limit counts as breaching it.
    """
    if p.outer_lower < balance < p.outer_upper:
        return no_action(balance)
    projected = stone_projection(balance, p, forecast_next_n)
    if projected < p.inner_upper and projected > p.inner_lower:
        return no_action(balance)
    if balance > p.target:
        return PolicyAction(ActionKind.FROM_CASH, balance - p.target, p.target)
    if balance < p.target:
        return PolicyAction(ActionKind.TO_CASH, p.target - balance, p.target)
    return no_action(balance)
