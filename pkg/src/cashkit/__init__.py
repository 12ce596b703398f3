"""Treasury cash-management toolkit.

Closed-form cash policies (Baumol, Beranek, Miller-Orr, Stone), precautionary
and speculative cash levels, value impact via discounted free cash flow,
rolling cash budgets, and day-by-day policy simulation.
"""

from .budget import BudgetAssumptions, CashBudget, Obligation, PeriodSlice, build_budget, roll_budget
from .cash_policy import (
    ActionKind,
    BaumolParams,
    MillerOrrLevels,
    MillerOrrParams,
    PolicyAction,
    StoneParams,
    baumol_optimal,
    baumol_step,
    beranek_optimal,
    beranek_step,
    miller_orr_levels,
    miller_orr_step,
    stone_step,
)
from .errors import CashkitError, ConfigError, DomainError, InputError
from .reserves import LclInputs, SafetyStockInputs, ValueImpact, lcl, lcl_value_impact, safety_stock
from .simulator import (
    CashFlowStream,
    SimulationConfig,
    SimulationReport,
    advise_model,
    compare_policies,
    generate_stream,
    simulate,
)
from .speculative import SpeculativeInputs, daily_capital_cost, expected_benefit, speculative_verdict
from .valuation import (
    BalanceSheetSnapshot,
    PeriodFinancials,
    StrategyVariant,
    ValuationContext,
    compare_strategies,
    delta_value,
    fcff,
    net_working_capital,
)

__version__ = "0.1.0"
