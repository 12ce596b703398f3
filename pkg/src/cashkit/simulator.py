"""Day-by-day replay of cash-flow streams through cash policies.

Daily order of events: the net flow lands, the policy looks at the new
balance and may act, then costs accrue on the end-of-day balance.

* holding cost = holding_rate * balance, on positive balances only
* transfer cost = a fixed charge per action
* shortage cost = shortage_cost per day (+ shortage_rate per unit of
  shortfall) while the balance is below max(0, lcl_floor)

Synthetic streams are drawn from numpy's ``Generator(PCG64(seed))``. PCG64
is a named, portable 128-bit permuted congruential generator, so a given
seed yields the same stream on every platform.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .cash_policy import (
    ActionKind,
    MillerOrrLevels,
    MillerOrrParams,
    PolicyAction,
    StoneParams,
    baumol_step,
    beranek_step,
    miller_orr_step,
    no_action,
    stone_step,
)
from .errors import ConfigError, InputError

POLICIES = ("none", "baumol", "beranek", "miller-orr", "stone")
STREAM_KINDS = ("constant_out", "constant_in", "seasonal", "gaussian", "mean_reverting")
FORECASTABILITY = ("full", "short_horizon", "none")
STONE_HORIZON_DAYS = 14


@dataclass(frozen=True, eq=False)
class CashFlowStream:
    days: np.ndarray
    flows: np.ndarray
    source: str = ""

    def __post_init__(self):
        days = np.asarray(self.days, dtype=np.int64)
        flows = np.asarray(self.flows, dtype=float)
        if days.ndim != 1 or days.shape != flows.shape:
            raise InputError("days and flows must be 1-d sequences of equal length")
        if days.size and np.any(np.diff(days) <= 0):
            raise InputError("day indices must be strictly increasing")
        if not np.all(np.isfinite(flows)):
            raise InputError("flows must be finite")
        days.setflags(write=False)
        flows.setflags(write=False)
        object.__setattr__(self, "days", days)
        object.__setattr__(self, "flows", flows)

    @classmethod
    def from_flows(cls, flows: Sequence[float], source: str = "", start: int = 1) -> "CashFlowStream":
        return cls(np.arange(start, start + len(flows)), flows, source)

    def __len__(self) -> int:
        return int(self.flows.size)

    def __eq__(self, other):
        if not isinstance(other, CashFlowStream):
            return NotImplemented
        return (np.array_equal(self.days, other.days)
                and np.array_equal(self.flows, other.flows)
                and self.source == other.source)

    @property
    def total(self) -> float:
        return math.fsum(self.flows.tolist())

    def sample_variance(self) -> float:
        """Unbiased variance of daily net flows, for Miller-Orr's sigma^2."""
        if len(self) < 2:
            raise InputError("need at least two days to estimate a variance")
        return float(np.var(self.flows, ddof=1))


@dataclass(frozen=True)
class SimulationConfig:
    policy: str
    opening_balance: float = 0.0
    holding_rate: float = 0.0
    transfer_cost: float = 0.0
    shortage_cost: float = 0.0
    shortage_rate: float = 0.0
    lcl_floor: float | None = None
    c_star: float | None = None
    levels: MillerOrrLevels | None = None
    stone: StoneParams | None = None
    # "oracle" (next n true flows) or a series aligned with the stream positions
    forecast: str | tuple[float, ...] | None = None
    label: str = ""

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ConfigError(f"unknown policy {self.policy!r}; choose from {POLICIES}")
        for name in ("holding_rate", "transfer_cost", "shortage_cost", "shortage_rate"):
            if not getattr(self, name) >= 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.policy in ("baumol", "beranek") and not (self.c_star and self.c_star > 0):
            raise ConfigError(f"{self.policy} policy needs c_star > 0")
        if self.policy == "miller-orr" and self.levels is None:
            raise ConfigError("miller-orr policy needs control levels")
        if self.policy == "stone":
            if self.stone is None:
                raise ConfigError("stone policy needs StoneParams")
            if self.forecast is None:
                raise ConfigError("stone policy needs a forecast source ('oracle' or a series)")
            if isinstance(self.forecast, str) and self.forecast != "oracle":
                raise ConfigError(f"unknown forecast source {self.forecast!r}")
        if self.forecast is not None and not isinstance(self.forecast, str):
            object.__setattr__(self, "forecast", tuple(float(x) for x in self.forecast))
        if not self.label:
            object.__setattr__(self, "label", self.policy)

    @property
    def shortage_threshold(self) -> float:
        return max(0.0, self.lcl_floor or 0.0)

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.stone is not None:
            d["stone"] = stone_to_dict(self.stone)
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "SimulationConfig":
        d = dict(d)
        if d.get("levels") is not None:
            d["levels"] = MillerOrrLevels(**d["levels"])
        if d.get("stone") is not None:
            d["stone"] = stone_from_dict(d["stone"])
        if isinstance(d.get("forecast"), list):
            d["forecast"] = tuple(d["forecast"])
        return cls(**d)


def stone_to_dict(p: StoneParams) -> dict:
    return {
        "miller_orr": asdict(p.miller_orr),
        "outer_upper": p.outer_upper,
        "outer_lower": p.outer_lower,
        "inner_upper": p.inner_upper,
        "inner_lower": p.inner_lower,
        "lookahead_days": p.lookahead_days,
    }


def stone_from_dict(d: Mapping) -> StoneParams:
    d = {k: v for k, v in d.items() if k != "target"}
    d["miller_orr"] = MillerOrrParams(**d["miller_orr"])
    return StoneParams(**d)


@dataclass(frozen=True)
class ActionRecord:
    day: int
    kind: str
    amount: float
    balance: float


@dataclass(frozen=True)
class SimulationReport:
    label: str
    policy: str
    days: tuple[int, ...]
    balances: tuple[float, ...]
    actions: tuple[ActionRecord, ...]
    holding_cost: float
    transfer_cost: float
    shortage_cost: float
    days_below_floor: int
    total_cost: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total_cost",
                           self.holding_cost + self.transfer_cost + self.shortage_cost)

    @property
    def transfer_count(self) -> int:
        return len(self.actions)

    @property
    def average_balance(self) -> float:
        return float(np.mean(self.balances))

    def trajectory_rows(self) -> list[dict]:
        by_day = {a.day: a for a in self.actions}
        rows = []
        for day, bal in zip(self.days, self.balances):
            a = by_day.get(day)
            rows.append({
                "day": day,
                "balance": bal,
                "action": a.kind if a else ActionKind.NONE.value,
                "amount": a.amount if a else 0.0,
            })
        return rows

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "policy": self.policy,
            "days": list(self.days),
            "balances": list(self.balances),
            "actions": [asdict(a) for a in self.actions],
            "holding_cost": self.holding_cost,
            "transfer_cost": self.transfer_cost,
            "shortage_cost": self.shortage_cost,
            "total_cost": self.total_cost,
            "transfer_count": self.transfer_count,
            "days_below_floor": self.days_below_floor,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "SimulationReport":
        return cls(
            label=d["label"],
            policy=d["policy"],
            days=tuple(int(x) for x in d["days"]),
            balances=tuple(float(x) for x in d["balances"]),
            actions=tuple(ActionRecord(**a) for a in d["actions"]),
            holding_cost=float(d["holding_cost"]),
            transfer_cost=float(d["transfer_cost"]),
            shortage_cost=float(d["shortage_cost"]),
            days_below_floor=int(d["days_below_floor"]),
        )


def _forecast_window(cfg: SimulationConfig, flows: np.ndarray, i: int, n: int) -> list[float]:
    source = flows if cfg.forecast == "oracle" else cfg.forecast
    window = list(source[i + 1:i + 1 + n])
    return window + [0.0] * (n - len(window))


def _step(cfg: SimulationConfig, prev: float, flow: float, flows, i) -> PolicyAction:
    policy = cfg.policy
    if policy == "baumol":
        return baumol_step(prev, -flow, cfg.c_star)
    if policy == "beranek":
        return beranek_step(prev, flow, cfg.c_star)
    balance = prev + flow
    if policy == "miller-orr":
        return miller_orr_step(balance, cfg.levels)
    if policy == "stone":
        n = cfg.stone.lookahead_days
        return stone_step(balance, cfg.stone, _forecast_window(cfg, flows, i, n))
    return no_action(balance)


def simulate(stream: CashFlowStream, cfg: SimulationConfig) -> SimulationReport:
    if len(stream) == 0:
        raise InputError("cannot simulate an empty stream")
    if (cfg.policy == "stone" and not isinstance(cfg.forecast, str)
            and len(cfg.forecast) != len(stream)):
        raise ConfigError("supplied forecast must have one value per stream day")

    flows = stream.flows.tolist()
    days = stream.days.tolist()
    threshold = cfg.shortage_threshold
    balance = float(cfg.opening_balance)
    balances = []
    actions = []
    holding = transfers = shortage = 0.0
    below = 0
    for i, (day, flow) in enumerate(zip(days, flows)):
        action = _step(cfg, balance, flow, flows, i)
        balance = action.resulting_balance
        if action.fired:
            actions.append(ActionRecord(day, action.kind.value, action.amount, balance))
            transfers += cfg.transfer_cost
        if balance > 0:
            holding += cfg.holding_rate * balance
        if balance < threshold:
            below += 1
            shortage += cfg.shortage_cost + cfg.shortage_rate * (threshold - balance)
        balances.append(balance)
    return SimulationReport(cfg.label, cfg.policy, tuple(days), tuple(balances), tuple(actions),
                            holding, transfers, shortage, below)


def generate_stream(kind: str, params: Mapping[str, float] | None = None, seed: int = 0,
                    days: int = 360) -> CashFlowStream:
    """Synthetic daily net flows.

    ===============  ==========================================  =====================
    kind             params (defaults)                           moments
    ===============  ==========================================  =====================
    constant_out     amount                                      every day -amount
    constant_in      amount                                      every day +amount
    seasonal         lump, outflow, cycle=30, lump_day=0,        cycle sum =
                     noise=0                                     lump - cycle*outflow
    gaussian         mean=0, stddev                              N(mean, stddev^2)
    mean_reverting   stddev, phi=0.7, mean=0                     flow = mean + y_t - y_{t-1},
                                                                 y_t = phi y_{t-1} + N(0, stddev^2)
    ===============  ==========================================  =====================

    The mean-reverting kind makes the *balance* revert: cumulative flows
    track the AR(1) level ``y``, whose stationary sd is stddev/sqrt(1-phi^2).
    """
    params = dict(params or {})
    if kind not in STREAM_KINDS:
        raise InputError(f"unknown stream kind {kind!r}; choose from {STREAM_KINDS}")
    if days < 1:
        raise InputError("days must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))

    def need(name):
        if name not in params:
            raise InputError(f"{kind} stream needs parameter {name!r}")
        return float(params[name])

    if kind == "constant_out":
        flows = np.full(days, -need("amount"))
    elif kind == "constant_in":
        flows = np.full(days, need("amount"))
    elif kind == "seasonal":
        cycle = int(params.get("cycle", 30))
        lump_day = int(params.get("lump_day", 0))
        if cycle < 1 or not 0 <= lump_day < cycle:
            raise InputError("seasonal stream needs cycle >= 1 and 0 <= lump_day < cycle")
        flows = np.full(days, -need("outflow"))
        flows[lump_day::cycle] += need("lump")
        noise = float(params.get("noise", 0.0))
        if noise:
            flows = flows + rng.normal(0.0, noise, days)
    elif kind == "gaussian":
        flows = rng.normal(float(params.get("mean", 0.0)), need("stddev"), days)
    else:
        sd = need("stddev")
        phi = float(params.get("phi", 0.7))
        if not -1.0 < phi < 1.0:
            raise InputError("phi must lie in (-1, 1)")
        shocks = rng.normal(0.0, sd, days)
        level = np.empty(days)
        y = 0.0
        for t in range(days):
            y = phi * y + shocks[t]
            level[t] = y
        flows = float(params.get("mean", 0.0)) + np.diff(level, prepend=0.0)
    return CashFlowStream.from_flows(flows, source=f"{kind}:seed={seed}")


@dataclass(frozen=True)
class Advice:
    model: str
    situation: int
    rationale: str


def advise_model(stream: CashFlowStream, forecastable: str,
                 forecast_horizon_days: int | None = None,
                 stone_horizon_days: int = STONE_HORIZON_DAYS) -> Advice:
    """Pick a cash model from how predictable and how one-sided the flows are.

    ``forecast_horizon_days`` is optional: when given with ``forecastable="full"``
    and shorter than ``stone_horizon_days`` the stream is treated as only
    short-horizon forecastable.
    """
    if len(stream) == 0:
        raise InputError("cannot advise on an empty stream")
    if forecastable not in FORECASTABILITY:
        raise InputError(f"forecastable must be one of {FORECASTABILITY}")
    if (forecastable == "full" and forecast_horizon_days is not None
            and forecast_horizon_days < stone_horizon_days):
        forecastable = "short_horizon"

    if forecastable == "none":
        return Advice("miller-orr", 4,
                      "flows cannot be forecast; use a control band with automatic "
                      "return to target")
    if forecastable == "short_horizon":
        return Advice("stone", 4,
                      f"flows are forecastable only a few days ahead (under ~{stone_horizon_days} "
                      "days); check the short forecast before acting on a limit breach")
    total = stream.total
    if total < 0:
        return Advice("baumol", 2,
                      f"forecastable flows with net outflow {total:.2f}; replenish cash in "
                      "optimal lots as it is spent")
    if total > 0:
        return Advice("beranek", 1,
                      f"forecastable flows with net inflow {total:.2f}; sweep surplus cash "
                      "into securities in optimal lots")
    return Advice("miller-orr", 3,
                  "situation 3: flows are forecastable but neither inflows nor outflows "
                  "dominate; fall back to a control band")


def compare_policies(stream: CashFlowStream,
                     configs: Sequence[SimulationConfig]) -> list[SimulationReport]:
    """Simulate every config on ``stream``; cheapest first, ties to fewer transfers."""
    if len(configs) < 2:
        raise InputError("need at least two configs to compare")
    reports = [simulate(stream, cfg) for cfg in configs]
    return sorted(reports, key=lambda r: (r.total_cost, r.transfer_count))
