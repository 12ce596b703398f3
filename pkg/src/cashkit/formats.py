"""CSV / JSON readers and writers for streams, budgets and reports.

Money is written with a fixed two-decimal format and a '.' separator,
independent of the process locale.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import asdict
from pathlib import Path
from typing import IO, Iterable, Mapping

from .budget import BudgetAssumptions, CashBudget, Obligation, PeriodSlice
from .errors import InputError
from .simulator import CashFlowStream, SimulationReport

OBLIGATION_COLUMNS = ("tax", "interest", "other")


def fmt_money(x: float) -> str:
    return f"{float(x):.2f}"


def _open_text(path: str | Path) -> IO[str]:
    if str(path) == "-":
        return io.StringIO(sys.stdin.read())
    try:
        return open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


# -- streams ------------------------------------------------------------------

def parse_stream_csv(fh: IO[str], source: str = "") -> CashFlowStream:
    reader = csv.DictReader(fh)
    if reader.fieldnames is None or not {"day", "net_flow"} <= set(reader.fieldnames):
        raise InputError("stream CSV needs a header with 'day' and 'net_flow' columns")
    days, flows = [], []
    for lineno, row in enumerate(reader, start=2):
        try:
            days.append(int(row["day"]))
            flows.append(float(row["net_flow"]))
        except (TypeError, ValueError) as exc:
            raise InputError(f"line {lineno}: {exc}") from exc
    return CashFlowStream(days, flows, source)


def read_stream_csv(path: str | Path) -> CashFlowStream:
    with _open_text(path) as fh:
        return parse_stream_csv(fh, source=str(path))


def write_stream_csv(stream: CashFlowStream, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["day", "net_flow"])
    for day, flow in zip(stream.days.tolist(), stream.flows.tolist()):
        w.writerow([day, repr(float(flow))])


# -- simulation reports -------------------------------------------------------

def report_json(report: SimulationReport | Iterable[SimulationReport]) -> str:
    if isinstance(report, SimulationReport):
        payload = report.to_dict()
    else:
        payload = [r.to_dict() for r in report]
    return json.dumps(payload, indent=2, sort_keys=True)


def write_trajectory_csv(report: SimulationReport, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["day", "balance", "action", "amount"])
    for row in report.trajectory_rows():
        w.writerow([row["day"], fmt_money(row["balance"]), row["action"], fmt_money(row["amount"])])


# -- budgets ------------------------------------------------------------------

def assumptions_to_dict(a: BudgetAssumptions) -> dict:
    d = asdict(a)
    d["periods"] = list(a.periods)
    return d


def assumptions_from_dict(d: Mapping) -> BudgetAssumptions:
    try:
        return BudgetAssumptions(
            periods=tuple(d["periods"]),
            sales_forecast=tuple(float(x) for x in d["sales_forecast"]),
            collection_profile=tuple(float(x) for x in d["collection_profile"]),
            purchase_schedule=tuple(float(x) for x in d["purchase_schedule"]),
            fixed_obligations=tuple(Obligation(**ob) for ob in d.get("fixed_obligations", ())),
            opening_balance=float(d.get("opening_balance", 0.0)),
            granularity=d.get("granularity", "month"),
            carried_inflows=tuple(float(x) for x in d.get("carried_inflows", ())),
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad budget assumptions: {exc}") from exc


def slice_from_dict(d: Mapping) -> PeriodSlice:
    try:
        return PeriodSlice(
            label=str(d["label"]),
            sales=float(d.get("sales", 0.0)),
            purchases=float(d.get("purchases", 0.0)),
            obligations=tuple(Obligation(**ob) for ob in d.get("obligations", ())),
            granularity=d.get("granularity"),
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad period slice: {exc}") from exc


def parse_assumptions_csv(fh: IO[str], collection_profile, opening_balance=0.0,
                          granularity="month") -> BudgetAssumptions:
    """One row per period: ``period,sales,purchases[,tax,interest,other]``."""
    reader = csv.DictReader(fh)
    if reader.fieldnames is None or not {"period", "sales", "purchases"} <= set(reader.fieldnames):
        raise InputError("budget CSV needs 'period', 'sales' and 'purchases' columns")
    periods, sales, purchases, obligations = [], [], [], []
    for lineno, row in enumerate(reader, start=2):
        try:
            periods.append(row["period"])
            sales.append(float(row["sales"]))
            purchases.append(float(row["purchases"]))
            for kind in OBLIGATION_COLUMNS:
                if row.get(kind) not in (None, ""):
                    amount = float(row[kind])
                    if amount:
                        obligations.append(Obligation(row["period"], amount, kind))
        except (TypeError, ValueError) as exc:
            raise InputError(f"line {lineno}: {exc}") from exc
    return BudgetAssumptions(tuple(periods), tuple(sales), tuple(collection_profile),
                             tuple(purchases), tuple(obligations), opening_balance, granularity)


def read_assumptions(path: str | Path, collection_profile=None, opening_balance=None,
                     granularity=None) -> BudgetAssumptions:
    """Load assumptions from ``.json`` (full document) or CSV (rows + flags)."""
    with _open_text(path) as fh:
        if str(path).endswith(".json"):
            try:
                d = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}: {exc}") from exc
            overrides = {"collection_profile": collection_profile,
                         "opening_balance": opening_balance, "granularity": granularity}
            d.update({k: v for k, v in overrides.items() if v is not None})
            return assumptions_from_dict(d)
        if collection_profile is None:
            raise InputError("CSV assumptions need a collection profile")
        return parse_assumptions_csv(fh, collection_profile, opening_balance or 0.0,
                                     granularity or "month")


def budget_to_dict(b: CashBudget) -> dict:
    return {
        "periods": list(b.periods),
        "inflows": list(b.inflows),
        "outflows": list(b.outflows),
        "net_flow": list(b.net_flow),
        "closing_balance": list(b.closing_balance),
        "opening_balance": b.opening_balance,
        "uncollected_tail": b.uncollected_tail,
        "bad_debt": b.bad_debt,
        "assumptions": assumptions_to_dict(b.assumptions),
    }


def budget_from_dict(d: Mapping) -> CashBudget:
    return CashBudget(
        periods=tuple(d["periods"]),
        inflows=tuple(d["inflows"]),
        outflows=tuple(d["outflows"]),
        net_flow=tuple(d["net_flow"]),
        closing_balance=tuple(d["closing_balance"]),
        opening_balance=d["opening_balance"],
        uncollected_tail=d["uncollected_tail"],
        bad_debt=d["bad_debt"],
        assumptions=assumptions_from_dict(d["assumptions"]),
    )


def write_budget_csv(b: CashBudget, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["period", "inflows", "outflows", "net_flow", "closing_balance"])
    for row in b.rows():
        w.writerow([row["period"]] + [fmt_money(row[k]) for k in
                                      ("inflows", "outflows", "net_flow", "closing_balance")])
