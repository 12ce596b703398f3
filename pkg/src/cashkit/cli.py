"""Command-line front end: ``cashkit <command> [flags]``.

Exit codes: 0 success, 1 input/usage/config error, 2 domain error.
A JSON config file (``--config`` or ``$CASHKIT_CONFIG``) supplies defaults;
command-line flags always win.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import budget as bud
from . import cash_policy as cp
from . import formats
from . import reserves as rsv
from . import simulator as sim
from . import speculative
from . import valuation as val
from .errors import CashkitError, ConfigError, InputError

CONFIG_ENV = "CASHKIT_CONFIG"
FORMATS = ("table", "json", "csv")
DAY_COUNTS = (360, 365)


@dataclass
class AppConfig:
    day_count: int = 360
    format: str = "table"
    rate: float | None = None  # default annual cost of capital
    horizon: int = bud.DEFAULT_HORIZON
    output_dir: str | None = None
    defaults: dict = field(default_factory=dict)  # per-command flag defaults

    def __post_init__(self):
        if self.day_count not in DAY_COUNTS:
            raise ConfigError(f"day_count must be one of {DAY_COUNTS}, got {self.day_count!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")

    @classmethod
    def load(cls, path: str | None) -> "AppConfig":
        path = path or os.environ.get(CONFIG_ENV)
        if not path:
            return cls()
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot load config {path}: {exc}") from exc
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from exc


def _key_value(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number in {text!r}") from exc


# -- output -------------------------------------------------------------------

def _round(obj):
    if isinstance(obj, float):
        return round(obj, 2) if math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _cell(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return formats.fmt_money(v)
    return str(v)


def emit(record: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(_round(record), indent=2, sort_keys=False) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(record.keys())
        w.writerow([_cell(v) for v in record.values()])
    else:
        width = max(len(k) for k in record)
        for k, v in record.items():
            out.write(f"{k:<{width}}  {_cell(v)}\n")


def emit_rows(rows: list[dict], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(_round(rows), indent=2) + "\n")
        return
    if not rows:
        return
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(rows[0].keys())
        for r in rows:
            w.writerow([_cell(v) for v in r.values()])
    else:
        keys = list(rows[0])
        cells = [[_cell(r[k]) for k in keys] for r in rows]
        widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
        out.write("  ".join(k.rjust(w) for k, w in zip(keys, widths)) + "\n")
        for c in cells:
            out.write("  ".join(x.rjust(w) for x, w in zip(c, widths)) + "\n")


def _warn(msg: str) -> None:
    sys.stderr.write(f"warning: {msg}\n")


# -- valuation ------------------------------------------------------------------

def cmd_nwc(args, cfg):
    b = val.BalanceSheetSnapshot(
        args.current_assets if args.current_assets is not None
        else args.receivables + args.inventory + args.cash,
        args.current_liabilities if args.current_liabilities is not None else args.payables,
        args.receivables, args.inventory, args.cash, args.payables,
    )
    emit({"nwc": val.net_working_capital(b),
          "nwc_components": val.net_working_capital_from_components(b),
          "consistent": b.is_consistent}, args.format)


def cmd_fcff(args, cfg):
    p = val.PeriodFinancials(args.cash_revenue, args.fixed_costs, args.variable_costs,
                             args.non_cash_expenses, args.tax_rate, args.nwc_growth, args.capex)
    emit({"fcff": val.fcff(p)}, args.format)


def cmd_value(args, cfg):
    rate = _need(args.rate, "--rate")
    if args.level is not None:
        ctx = val.ValuationContext.perpetuity(rate)
        value = val.delta_value([args.level], ctx, time_zero=args.time_zero)
        emit({"mode": "perpetuity", "delta_value": value}, args.format)
    else:
        if not args.deltas:
            raise InputError("give --deltas for a finite horizon or --level for a perpetuity")
        ctx = val.ValuationContext.finite(rate, len(args.deltas))
        value = val.delta_value(args.deltas, ctx, time_zero=args.time_zero)
        emit({"mode": "finite", "periods": len(args.deltas), "delta_value": value}, args.format)


# -- cash policy --------------------------------------------------------------

def _miller_orr_params(args, cfg, stream=None) -> cp.MillerOrrParams:
    daily_rate = args.daily_rate
    if daily_rate is None:
        daily_rate = _need(args.rate, "--daily-rate or --rate") / (args.basis or cfg.day_count)
    variance = args.variance
    if variance is None and args.stddev is not None:
        variance = args.stddev ** 2
    if variance is None and stream is not None:
        variance = stream.sample_variance()
    if variance is None:
        raise InputError("give --variance, --stddev or --flows to estimate sigma^2")
    return cp.MillerOrrParams(args.lower, _need(args.transfer_cost, "--transfer-cost"),
                              daily_rate, variance)


def cmd_policy(args, cfg):
    model = args.model
    if model in ("baumol", "beranek"):
        p = cp.BaumolParams(args.period_flow, args.transfer_cost, _need(args.rate, "--rate"))
        s = cp.baumol_optimal(p) if model == "baumol" else cp.beranek_optimal(p)
        emit({"model": model, "optimal_cash": s.optimal_cash, "avg_balance": s.avg_balance,
              "transfer_size": s.transfer_size, "transfers_per_period": s.transfers_per_period,
              "transfers_rounded_up": math.ceil(s.transfers_per_period),
              "total_cost": cp.baumol_cost(s.optimal_cash, p)}, args.format)
        return
    stream = formats.read_stream_csv(args.flows) if args.flows else None
    mo = _miller_orr_params(args, cfg, stream)
    lv = cp.miller_orr_levels(mo)
    record = {"model": model, "lower": lv.lower, "target": lv.target, "upper": lv.upper,
              "daily_variance": mo.daily_variance}
    if model == "stone":
        st = cp.StoneParams.from_miller_orr(mo, args.inner_fraction, args.lookahead)
        record.update({"outer_lower": st.outer_lower, "inner_lower": st.inner_lower,
                       "inner_upper": st.inner_upper, "outer_upper": st.outer_upper,
                       "lookahead_days": st.lookahead_days})
    emit(record, args.format)


# -- reserves -----------------------------------------------------------------

def _report_level(name, level: rsv.ReserveLevel, fmt):
    if level.degenerate:
        _warn(f"{name}: degenerate domain (log argument >= 1); level set to 0")
    emit({name: level.value, "degenerate": level.degenerate}, fmt)


def cmd_lcl(args, cfg):
    inp = rsv.LclInputs.from_annual(_need(args.rate, "--rate"), args.avg_transfer, args.flow_sum,
                                    args.stddev, args.shortage_cost,
                                    basis=args.basis or cfg.day_count,
                                    flow_period_days=args.flow_period_days)
    _report_level("lcl", rsv.lcl(inp), args.format)


def cmd_safety_stock(args, cfg):
    inp = rsv.SafetyStockInputs(args.holding_cost_rate, args.order_quantity, args.unit_price,
                                args.demand, args.stddev, args.stockout_cost)
    _report_level("safety_stock", rsv.safety_stock(inp), args.format)


def cmd_lcl_impact(args, cfg):
    vi = rsv.lcl_value_impact(args.new, args.old, _need(args.rate, "--rate"), args.tax_rate)
    emit({"nwc_growth": vi.nwc_growth, "yearly_alt_cost": vi.yearly_alt_cost,
          "value_change": vi.value_change}, args.format)


# -- speculative --------------------------------------------------------------

def cmd_speculate(args, cfg):
    inp = speculative.SpeculativeInputs(args.units, args.price, args.sigma, _need(args.rate, "--rate"),
                                 args.up_prob, args.basis or cfg.day_count)
    v = speculative.speculative_verdict(inp)
    emit({"expected_benefit": v.expected_benefit, "daily_cost": v.daily_cost,
          "verdict": "HOLD" if v.hold else "DEPLOY",
          # a volatility, not money: keep it out of the 2-decimal money format
          "breakeven_sigma": f"{speculative.breakeven_stddev(inp):.6f}"}, args.format)


# -- budget -------------------------------------------------------------------

def _write_budget(b: bud.CashBudget, args):
    if args.out:
        path = Path(args.out)
        if path.suffix == ".json":
            path.write_text(json.dumps(formats.budget_to_dict(b), indent=2) + "\n", encoding="utf-8")
        else:
            with open(path, "w", newline="", encoding="utf-8") as fh:
                formats.write_budget_csv(b, fh)
    if args.plot:
        from .plotting import plot_budget
        plot_budget(b, args.plot)
    emit_rows(b.rows(), args.format)
    if b.bad_debt:
        _warn(f"collection profile leaves {b.bad_debt:.2f} uncollected as bad debt")


def cmd_budget(args, cfg):
    a = formats.read_assumptions(args.assumptions, args.profile, args.opening, args.granularity)
    b = bud.build_budget(a)
    if args.action == "roll":
        if not args.new_period:
            raise InputError("budget roll needs --new-period")
        slices = json.loads(Path(args.new_period).read_text(encoding="utf-8"))
        if isinstance(slices, dict):
            slices = [slices]
        for d in slices:
            b = bud.roll_budget(b, b.assumptions, formats.slice_from_dict(d))
    _write_budget(b, args)


# -- simulator ----------------------------------------------------------------

def cmd_generate(args, cfg):
    stream = sim.generate_stream(args.kind, dict(args.param or []), args.seed, args.days)
    if args.out and args.out != "-":
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            formats.write_stream_csv(stream, fh)
    else:
        formats.write_stream_csv(stream, sys.stdout)


def _simulation_config(args, cfg, stream) -> sim.SimulationConfig:
    policy = args.policy
    basis = args.basis or cfg.day_count
    holding_rate = args.holding_rate
    if holding_rate is None:
        holding_rate = (args.rate / basis) if args.rate is not None else 0.0
    common = dict(opening_balance=args.opening, holding_rate=holding_rate,
                  transfer_cost=args.transfer_cost or 0.0, shortage_cost=args.shortage_cost,
                  shortage_rate=args.shortage_rate, lcl_floor=args.lcl_floor, label=policy)
    if policy in ("baumol", "beranek"):
        c_star = args.c_star
        if c_star is None:
            flows = stream.flows
            total = float(-flows[flows < 0].sum() if policy == "baumol" else flows[flows > 0].sum())
            period_rate = holding_rate * len(stream)
            if not (total > 0 and period_rate > 0 and args.transfer_cost):
                raise ConfigError("give --c-star, or --transfer-cost and a holding rate to derive it")
            c_star = cp.baumol_optimal(cp.BaumolParams(total, args.transfer_cost, period_rate)).optimal_cash
        return sim.SimulationConfig(policy, c_star=c_star, **common)
    if policy in ("miller-orr", "stone"):
        if args.target is not None:
            upper = args.upper if args.upper is not None else 3 * args.target - 2 * args.lower
            levels = cp.MillerOrrLevels(args.lower, args.target, upper)
            mo = None
        else:
            if holding_rate <= 0 or not args.transfer_cost:
                raise ConfigError("give --target, or --transfer-cost and a holding rate")
            mo = cp.MillerOrrParams(args.lower, args.transfer_cost, holding_rate,
                                    args.variance if args.variance is not None
                                    else stream.sample_variance())
            levels = cp.miller_orr_levels(mo)
        if policy == "miller-orr":
            return sim.SimulationConfig(policy, levels=levels, **common)
        if mo is None:
            raise ConfigError("stone policy derives its limits from Miller-Orr inputs; omit --target")
        stone = cp.StoneParams.from_miller_orr(mo, args.inner_fraction, args.lookahead)
        forecast = args.forecast or "oracle"
        if forecast != "oracle":
            forecast = tuple(formats.read_stream_csv(forecast).flows.tolist())
        return sim.SimulationConfig(policy, stone=stone, forecast=forecast, **common)
    return sim.SimulationConfig(policy, **common)


def _summary(r: sim.SimulationReport) -> dict:
    return {"label": r.label, "policy": r.policy, "days": len(r.days),
            "transfer_count": r.transfer_count, "holding_cost": r.holding_cost,
            "transfer_cost": r.transfer_cost, "shortage_cost": r.shortage_cost,
            "total_cost": r.total_cost, "days_below_floor": r.days_below_floor,
            "average_balance": r.average_balance}


def _rounded_report(r: sim.SimulationReport) -> sim.SimulationReport:
    return sim.SimulationReport.from_dict(_round(r.to_dict()))


def cmd_simulate(args, cfg):
    stream = formats.read_stream_csv(args.flows)
    config = _simulation_config(args, cfg, stream)
    report = sim.simulate(stream, config)
    if args.out_json:
        Path(args.out_json).write_text(formats.report_json(_rounded_report(report)) + "\n",
                                       encoding="utf-8")
    if args.out_csv:
        with open(args.out_csv, "w", newline="", encoding="utf-8") as fh:
            formats.write_trajectory_csv(report, fh)
    if args.plot:
        from .plotting import plot_trajectory
        levels = config.levels or (config.stone.levels() if config.stone else None)
        inner = (config.stone.inner_lower, config.stone.inner_upper) if config.stone else None
        plot_trajectory(report, args.plot, levels=levels, floor=config.lcl_floor, inner=inner)
    emit(_summary(report), args.format)


def cmd_advise(args, cfg):
    stream = formats.read_stream_csv(args.flows)
    advice = sim.advise_model(stream, args.forecastable, args.horizon_days)
    emit({"model": advice.model, "situation": advice.situation, "rationale": advice.rationale,
          "net_total": stream.total}, args.format)


def cmd_compare(args, cfg):
    stream = formats.read_stream_csv(args.flows)
    try:
        raw = json.loads(Path(args.configs).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read configs {args.configs}: {exc}") from exc
    try:
        configs = [sim.SimulationConfig.from_dict(d) for d in raw]
    except TypeError as exc:
        raise ConfigError(f"bad simulation config: {exc}") from exc
    reports = sim.compare_policies(stream, configs)
    if args.out_json:
        Path(args.out_json).write_text(
            formats.report_json([_rounded_report(r) for r in reports]) + "\n", encoding="utf-8")
    if args.plot:
        from .plotting import plot_comparison
        plot_comparison(reports, args.plot)
    rows = [dict(rank=i + 1, **_summary(r)) for i, r in enumerate(reports)]
    emit_rows(rows, args.format)


# -- parser -------------------------------------------------------------------

def _need(value, flag):
    if value is None:
        raise InputError(f"missing required value {flag}")
    return value


def _add_common(p):
    p.add_argument("--format", choices=FORMATS, default=None, help="output format (default table)")
    p.add_argument("--config", default=None, help=f"JSON config file (or ${CONFIG_ENV})")


def _add_rate(p, help_text="annual cost of capital, fraction/year (e.g. 0.18)"):
    p.add_argument("--rate", type=float, default=None, help=help_text)


def _add_basis(p):
    p.add_argument("--basis", type=int, choices=DAY_COUNTS, default=None,
                   help="day-count convention, days/year (default 360)")


def _add_mo_flags(p, need_variance=True):
    p.add_argument("--lower", type=float, default=0.0, help="lower control limit L, money (default 0)")
    p.add_argument("--transfer-cost", type=float, default=None,
                   help="fixed cost per securities transfer F, money/transfer")
    p.add_argument("--daily-rate", type=float, default=None,
                   help="opportunity rate k, fraction/day (or give --rate and --basis)")
    p.add_argument("--variance", type=float, default=None,
                   help="variance of daily net flows sigma^2, money^2")
    if need_variance:
        p.add_argument("--stddev", type=float, default=None,
                       help="std. deviation of daily net flows, money (alternative to --variance)")
    p.add_argument("--inner-fraction", type=float, default=cp.DEFAULT_INNER_FRACTION,
                   help="Stone inner band as a fraction of the Miller-Orr half-width (default 0.8)")
    p.add_argument("--lookahead", type=int, default=cp.DEFAULT_LOOKAHEAD_DAYS,
                   help="Stone look-ahead n, days (default 5)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cashkit", description="Treasury cash-management toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("nwc", help="net working capital")
    for flag, text in (("--receivables", "accounts receivable, money"),
                       ("--inventory", "inventories, money"),
                       ("--cash", "cash, money"),
                       ("--payables", "accounts payable, money")):
        p.add_argument(flag, type=float, default=0.0, help=text)
    p.add_argument("--current-assets", type=float, default=None,
                   help="current assets, money (default receivables + inventory + cash)")
    p.add_argument("--current-liabilities", type=float, default=None,
                   help="current liabilities, money (default payables)")
    _add_common(p)
    p.set_defaults(func=cmd_nwc)

    p = sub.add_parser("fcff", help="free cash flow to firm for one period")
    for flag, text in (("--cash-revenue", "cash revenue, money/period"),
                       ("--fixed-costs", "fixed costs, money/period"),
                       ("--variable-costs", "variable costs, money/period"),
                       ("--non-cash-expenses", "depreciation and other non-cash expenses, money/period"),
                       ("--nwc-growth", "increase in net working capital, money"),
                       ("--capex", "capital expenditure, money")):
        p.add_argument(flag, type=float, default=0.0, help=text)
    p.add_argument("--tax-rate", type=float, default=0.0, help="tax rate, fraction in [0, 1]")
    _add_common(p)
    p.set_defaults(func=cmd_fcff)

    p = sub.add_parser("value", help="present value of cash-flow changes")
    _add_rate(p, "discount rate (WACC), fraction/period")
    p.add_argument("--deltas", type=_floats, default=None,
                   help="comma-separated cash-flow changes for periods 1..n, money/period")
    p.add_argument("--level", type=float, default=None,
                   help="perpetual cash-flow change per period, money/period")
    p.add_argument("--time-zero", type=float, default=0.0, help="undiscounted change at t=0, money")
    _add_common(p)
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("policy", help="cash policy parameters (baumol|beranek|miller-orr|stone)")
    p.add_argument("model", choices=("baumol", "beranek", "miller-orr", "stone"))
    p.add_argument("--period-flow", type=float, default=None,
                   help="Baumol: total outflow P / Beranek: total inflow, money/period")
    _add_rate(p, "opportunity rate k for the same period as --period-flow, fraction/period")
    _add_basis(p)
    _add_mo_flags(p)
    p.add_argument("--flows", default=None, help="stream CSV (day,net_flow) to estimate sigma^2; '-' for stdin")
    _add_common(p)
    p.set_defaults(func=cmd_policy)

    p = sub.add_parser("lcl", help="precautionary (low) cash level")
    _add_rate(p)
    _add_basis(p)
    p.add_argument("--avg-transfer", type=float, required=True, help="average single cash transfer G*, money")
    p.add_argument("--flow-sum", type=float, required=True, help="sum of cash inflows and outflows P, money/period")
    p.add_argument("--stddev", type=float, required=True, help="std. deviation of daily net flows s, money")
    p.add_argument("--shortage-cost", type=float, required=True, help="cost of a cash shortage K, money")
    p.add_argument("--flow-period-days", type=float, default=None,
                   help="days covered by --flow-sum, days (warns when it differs from the daily rate basis)")
    _add_common(p)
    p.set_defaults(func=cmd_lcl)

    p = sub.add_parser("safety-stock", help="inventory safety stock")
    p.add_argument("--holding-cost-rate", type=float, required=True, help="inventory holding cost C, fraction/period")
    p.add_argument("--order-quantity", type=float, required=True, help="order quantity Q, units")
    p.add_argument("--unit-price", type=float, required=True, help="unit price v, money/unit")
    p.add_argument("--demand", type=float, required=True, help="demand P, units/period")
    p.add_argument("--stddev", type=float, required=True, help="std. deviation of usage s, units")
    p.add_argument("--stockout-cost", type=float, required=True, help="stock-out cost K, money")
    _add_common(p)
    p.set_defaults(func=cmd_safety_stock)

    p = sub.add_parser("lcl-impact", help="value impact of changing the precautionary cash level")
    p.add_argument("--new", type=float, required=True, help="new precautionary level, money")
    p.add_argument("--old", type=float, default=0.0, help="previous precautionary level, money (default 0)")
    _add_rate(p)
    p.add_argument("--tax-rate", type=float, default=0.0, help="tax rate, fraction in [0, 1]")
    _add_common(p)
    p.set_defaults(func=cmd_lcl_impact)

    p = sub.add_parser("speculate", help="one-day value of holding speculative cash")
    p.add_argument("--units", type=float, required=True, help="units of the asset the cash could buy, count")
    p.add_argument("--price", type=float, required=True, help="current (long-term) price, money/unit")
    p.add_argument("--sigma", type=float, required=True, help="daily price std. deviation, fraction of price")
    _add_rate(p)
    p.add_argument("--up-prob", type=float, default=0.5, help="probability of an up-move, fraction (default 0.5)")
    _add_basis(p)
    _add_common(p)
    p.set_defaults(func=cmd_speculate)

    p = sub.add_parser("budget", help="rolling cash budget (build|roll)")
    p.add_argument("action", choices=("build", "roll"))
    p.add_argument("--assumptions", required=True,
                   help="assumptions file: .json document or CSV rows period,sales,purchases[,tax,interest,other]")
    p.add_argument("--profile", type=_floats, default=None,
                   help="collection fractions by lag 0,1,2,... periods (CSV input), fractions")
    p.add_argument("--opening", type=float, default=None, help="opening cash balance, money")
    p.add_argument("--granularity", choices=bud.GRANULARITIES, default=None, help="period length")
    p.add_argument("--new-period", default=None,
                   help="roll: JSON file with one period slice or a list of slices to append")
    p.add_argument("--out", default=None, help="write budget to .json or .csv")
    p.add_argument("--plot", default=None, help="render budget figure to this image path")
    _add_common(p)
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("generate", help="synthetic daily cash-flow stream")
    p.add_argument("--kind", choices=sim.STREAM_KINDS, required=True, help="stream family")
    p.add_argument("--param", type=_key_value, action="append",
                   help="generator parameter key=value, money or fraction (repeatable)")
    p.add_argument("--seed", type=int, default=0, help="PCG64 seed")
    p.add_argument("--days", type=int, default=360, help="stream length, days")
    p.add_argument("--out", default=None, help="output CSV path (default stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("simulate", help="replay a stream through a cash policy")
    p.add_argument("--flows", required=True, help="stream CSV (day,net_flow); '-' for stdin")
    p.add_argument("--policy", choices=sim.POLICIES, required=True, help="cash policy")
    p.add_argument("--opening", type=float, default=0.0, help="opening balance, money")
    p.add_argument("--holding-rate", type=float, default=None,
                   help="holding (opportunity) cost, fraction/day (default --rate / --basis)")
    _add_rate(p)
    _add_basis(p)
    p.add_argument("--shortage-cost", type=float, default=0.0, help="cost per day below the floor, money/day")
    p.add_argument("--shortage-rate", type=float, default=0.0,
                   help="extra cost per unit of shortfall per day, fraction/day")
    p.add_argument("--lcl-floor", type=float, default=None, help="precautionary floor, money")
    p.add_argument("--c-star", type=float, default=None, help="Baumol/Beranek transfer size, money")
    p.add_argument("--target", type=float, default=None, help="Miller-Orr target, money (default: optimal)")
    p.add_argument("--upper", type=float, default=None, help="Miller-Orr upper limit, money (default 3*target-2*L)")
    _add_mo_flags(p, need_variance=False)
    p.add_argument("--forecast", default=None,
                   help="Stone forecast: 'oracle' (true next flows) or a stream CSV path")
    p.add_argument("--out-json", default=None, help="write the full JSON report here")
    p.add_argument("--out-csv", default=None, help="write the day,balance,action,amount trajectory here")
    p.add_argument("--plot", default=None, help="render the balance trajectory to this image path")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("advise", help="recommend a cash model for a stream")
    p.add_argument("--flows", required=True, help="stream CSV (day,net_flow); '-' for stdin")
    p.add_argument("--forecastable", choices=sim.FORECASTABILITY, required=True,
                   help="how far ahead flows can be forecast")
    p.add_argument("--horizon-days", type=int, default=None,
                   help="reliable forecast horizon, days (under 14 means short-horizon)")
    _add_common(p)
    p.set_defaults(func=cmd_advise)

    p = sub.add_parser("compare", help="rank policies on one stream by total cost")
    p.add_argument("--flows", required=True, help="stream CSV (day,net_flow); '-' for stdin")
    p.add_argument("--configs", required=True, help="JSON list of simulation configs")
    p.add_argument("--out-json", default=None, help="write all JSON reports here")
    p.add_argument("--plot", default=None, help="render overlaid trajectories to this image path")
    _add_common(p)
    p.set_defaults(func=cmd_compare)
    return parser


def _apply_config(parser, argv, args, cfg: AppConfig):
    """Re-parse with config values installed as defaults, so explicit flags still win."""
    overrides = {k.replace("-", "_"): v for k, v in cfg.defaults.get(args.command, {}).items()}
    if overrides:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise ConfigError(f"unknown defaults for {args.command!r}: {', '.join(unknown)}")
        sub.set_defaults(**overrides)
        args = parser.parse_args(argv)
    if args.format is None:
        args.format = cfg.format
    if hasattr(args, "rate") and args.rate is None:
        args.rate = cfg.rate
    return args


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = AppConfig.load(args.config)
        args = _apply_config(parser, argv, args, cfg)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            args.func(args, cfg)
        for w in caught:
            if not issubclass(w.category, rsv.DegenerateDomainWarning):
                _warn(str(w.message))
    except CashkitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    return 0


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
