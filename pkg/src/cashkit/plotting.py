"""Matplotlib figures for simulation and budget reports.

Figures are always written to files; nothing is shown interactively.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .budget import CashBudget  # noqa: E402
from .cash_policy import MillerOrrLevels  # noqa: E402
from .simulator import SimulationReport  # noqa: E402

FIGSIZE = (9, 4.5)


def _finish(fig, ax, path):
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_trajectory(report: SimulationReport, path, levels: MillerOrrLevels | None = None,
                    floor: float | None = None, inner: tuple[float, float] | None = None):
    """Balance path with control limits and action markers."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(report.days, report.balances, lw=0.8, color="tab:blue", label="balance")
    if levels is not None:
        ax.axhline(levels.upper, color="tab:red", ls="--", lw=1, label="upper limit")
        ax.axhline(levels.target, color="tab:green", ls="-", lw=1, label="target")
        ax.axhline(levels.lower, color="tab:red", ls="--", lw=1, label="lower limit")
    if inner is not None:
        for y in inner:
            ax.axhline(y, color="tab:orange", ls=":", lw=1)
    if floor:
        ax.axhline(floor, color="black", ls="-.", lw=1, label="precautionary floor")
    if report.actions:
        ax.scatter([a.day for a in report.actions], [a.balance for a in report.actions],
                   s=10, color="tab:purple", zorder=3, label=f"actions ({report.transfer_count})")
    ax.set_xlabel("day")
    ax.set_ylabel("cash balance")
    ax.set_title(f"{report.label}: total cost {report.total_cost:,.2f}")
    return _finish(fig, ax, path)


def plot_comparison(reports: Sequence[SimulationReport], path):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for r in reports:
        ax.plot(r.days, r.balances, lw=0.8,
                label=f"{r.label} (cost {r.total_cost:,.0f}, {r.transfer_count} transfers)")
    ax.set_xlabel("day")
    ax.set_ylabel("cash balance")
    ax.set_title("policy comparison")
    return _finish(fig, ax, path)


def plot_budget(budget: CashBudget, path):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    x = range(len(budget.periods))
    ax.bar([i - 0.2 for i in x], budget.inflows, width=0.4, color="tab:green", label="inflows")
    ax.bar([i + 0.2 for i in x], [-o for o in budget.outflows], width=0.4,
           color="tab:red", label="outflows")
    ax.plot(list(x), budget.closing_balance, marker="o", color="tab:blue", label="closing balance")
    ax.set_xticks(list(x))
    ax.set_xticklabels(budget.periods, rotation=30, ha="right")
    ax.set_ylabel("cash")
    ax.set_title("cash budget")
    return _finish(fig, ax, path)
