"""Rolling cash budgets.

Sales are converted to collections through a lag profile (fraction of a
period's sales collected 0, 1, 2, ... periods later). Outflows are purchases
plus fixed obligations (tax, interest, other) falling due in a period.

Rolling keeps the horizon length fixed: the oldest period is dropped, a new
one appended, and the dropped period's still-outstanding collections are
carried forward as an explicit inflow memo (``carried_inflows``) so that no
receivable is lost.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

from .errors import InputError

GRANULARITIES = ("week", "biweek", "month")
DEFAULT_HORIZON = 6
PROFILE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Obligation:
    due_period: str
    amount: float
    kind: str = "other"  # tax | interest | other


@dataclass(frozen=True)
class BudgetAssumptions:
    periods: tuple[str, ...]
    sales_forecast: tuple[float, ...]
    collection_profile: tuple[float, ...]
    purchase_schedule: tuple[float, ...]
    fixed_obligations: tuple[Obligation, ...] = ()
    opening_balance: float = 0.0
    granularity: str = "month"
    # collections owed by periods that precede the window, indexed from the window start
    carried_inflows: tuple[float, ...] = ()

    def __post_init__(self):
        for name in ("periods", "sales_forecast", "collection_profile",
                     "purchase_schedule", "fixed_obligations", "carried_inflows"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        n = len(self.periods)
        if n == 0:
            raise InputError("budget needs at least one period")
        if len(set(self.periods)) != n:
            raise InputError("period labels must be unique")
        if self.granularity not in GRANULARITIES:
            raise InputError(f"granularity must be one of {GRANULARITIES}, got {self.granularity!r}")
        if len(self.sales_forecast) != n or len(self.purchase_schedule) != n:
            raise InputError(
                f"granularity mismatch: {n} periods but {len(self.sales_forecast)} sales "
                f"and {len(self.purchase_schedule)} purchase values"
            )
        if not self.collection_profile:
            raise InputError("collection profile is empty")
        if any(not 0.0 <= f <= 1.0 for f in self.collection_profile):
            raise InputError("collection profile fractions must lie in [0, 1]")
        if sum(self.collection_profile) > 1.0 + PROFILE_TOLERANCE:
            raise InputError(f"collection profile sums to {sum(self.collection_profile)} > 1")
        labels = set(self.periods)
        for ob in self.fixed_obligations:
            if ob.due_period not in labels:
                raise InputError(f"obligation due in unknown period {ob.due_period!r}")
        inferred = infer_granularity(self.periods)
        if inferred is not None and inferred != self.granularity:
            raise InputError(
                f"granularity mismatch: labels look {inferred!r}, declared {self.granularity!r}"
            )

    @property
    def horizon(self) -> int:
        return len(self.periods)

    @property
    def profile_mass(self) -> float:
        return sum(self.collection_profile)


@dataclass(frozen=True)
class PeriodSlice:
    """Assumptions for one period appended by :func:`roll_budget`."""

    label: str
    sales: float
    purchases: float
    obligations: tuple[Obligation, ...] = ()
    granularity: str | None = None


@dataclass(frozen=True)
class CashBudget:
    periods: tuple[str, ...]
    inflows: tuple[float, ...]
    outflows: tuple[float, ...]
    net_flow: tuple[float, ...]
    closing_balance: tuple[float, ...]
    opening_balance: float
    uncollected_tail: float
    bad_debt: float
    assumptions: BudgetAssumptions = field(repr=False, compare=False)

    @property
    def final_balance(self) -> float:
        return self.closing_balance[-1]

    def rows(self) -> list[dict]:
        return [
            {"period": p, "inflows": i, "outflows": o, "net_flow": nf, "closing_balance": cb}
            for p, i, o, nf, cb in zip(self.periods, self.inflows, self.outflows,
                                       self.net_flow, self.closing_balance)
        ]


def _parse_label(label: str):
    for fmt in ("%Y-%m-%d", "%Y-%m"):
        try:
            return dt.datetime.strptime(label, fmt).date(), fmt
        except ValueError:
            continue
    return None, None


def infer_granularity(labels: Sequence[str]) -> str | None:
    """Guess the granularity of ISO-dated labels; ``None`` when labels are free text.

    Raises :class:`InputError` when dated labels are unevenly spaced.
    """
    parsed = [_parse_label(x) for x in labels]
    if len(parsed) < 2 or any(d is None for d, _ in parsed):
        return None
    if {f for _, f in parsed} == {"%Y-%m"}:
        months = [d.year * 12 + d.month for d, _ in parsed]
        gaps = {b - a for a, b in zip(months, months[1:])}
        if gaps == {1}:
            return "month"
        raise InputError(f"period labels are not consecutive months: {list(labels)}")
    days = [d for d, _ in parsed]
    gaps = {(b - a).days for a, b in zip(days, days[1:])}
    if gaps == {7}:
        return "week"
    if gaps == {14}:
        return "biweek"
    if gaps <= {28, 29, 30, 31} and all(d.day == days[0].day for d in days):
        return "month"
    raise InputError(f"period labels are not uniformly spaced: {list(labels)}")


def collections(sales: Sequence[float], profile: Sequence[float]) -> list[float]:
    """Truncated convolution of sales with the collection profile."""
    n = len(sales)
    out = [0.0] * n
    for t in range(n):
        for lag, frac in enumerate(profile):
            if lag > t:
                break
            out[t] += sales[t - lag] * frac
    return out


def build_budget(a: BudgetAssumptions) -> CashBudget:
    n = a.horizon
    inflows = collections(a.sales_forecast, a.collection_profile)
    for t, memo in enumerate(a.carried_inflows[:n]):
        inflows[t] += memo

    due = {p: 0.0 for p in a.periods}
    for ob in a.fixed_obligations:
        due[ob.due_period] += ob.amount
    outflows = [a.purchase_schedule[t] + due[p] for t, p in enumerate(a.periods)]

    net = [i - o for i, o in zip(inflows, outflows)]
    closing = []
    balance = a.opening_balance
    for x in net:
        balance = balance + x
        closing.append(balance)

    tail = 0.0
    for t, s in enumerate(a.sales_forecast):
        for lag, frac in enumerate(a.collection_profile):
            if t + lag >= n:
                tail += s * frac
    tail += math.fsum(a.carried_inflows[n:])
    bad_debt = (1.0 - a.profile_mass) * math.fsum(a.sales_forecast)
    return CashBudget(tuple(a.periods), tuple(inflows), tuple(outflows), tuple(net),
                      tuple(closing), a.opening_balance, tail, bad_debt, a)


def rolled_assumptions(b: CashBudget, a: BudgetAssumptions, new_period: PeriodSlice) -> BudgetAssumptions:
    if isinstance(new_period, (list, tuple)):
        if len(new_period) != 1:
            raise InputError(f"rolling extends the horizon by exactly one period, got {len(new_period)}")
        (new_period,) = new_period
    if tuple(b.periods) != tuple(a.periods):
        raise InputError("budget and assumptions cover different periods")
    if new_period.granularity is not None and new_period.granularity != a.granularity:
        raise InputError(
            f"granularity mismatch: new period is {new_period.granularity!r}, budget is {a.granularity!r}"
        )
    if new_period.label in a.periods[1:]:
        raise InputError(f"period {new_period.label!r} already in the budget")

    dropped_sales = a.sales_forecast[0]
    profile = a.collection_profile
    memo = list(a.carried_inflows[1:])
    memo += [0.0] * max(0, len(profile) - 1 - len(memo))
    for lag in range(1, len(profile)):
        memo[lag - 1] += dropped_sales * profile[lag]

    dropped = a.periods[0]
    obligations = tuple(ob for ob in a.fixed_obligations if ob.due_period != dropped)
    obligations += tuple(new_period.obligations)
    return replace(
        a,
        periods=a.periods[1:] + (new_period.label,),
        sales_forecast=a.sales_forecast[1:] + (new_period.sales,),
        purchase_schedule=a.purchase_schedule[1:] + (new_period.purchases,),
        fixed_obligations=obligations,
        opening_balance=b.closing_balance[0],
        carried_inflows=tuple(memo),
    )


def roll_budget(b: CashBudget, a: BudgetAssumptions, new_period: PeriodSlice) -> CashBudget:
    """Drop the oldest period, append ``new_period`` and rebuild.

    The returned budget's ``assumptions`` are the shifted ones, so rolling can
    be chained: ``roll_budget(r, r.assumptions, nxt)``.
    """
    return build_budget(rolled_assumptions(b, a, new_period))
