"""Two-type spectrum-reservation contracts: solver, simulator, and experiments.

The package splits into a pure analytics core (``specres.core``), the
optimal-menu solver with its dual closed-form/numerical routes
(``specres.solver``), an agent-based market simulation (``specres.sim``), the
time-frequency grid and reservation ledger (``specres.grid``), and the
experiment front end (``specres.config``, ``specres.sweeps``,
``specres.plotting``, ``specres.cli``).
"""

from specres.core import (
    FEASIBILITY_EPS,
    ConstraintReport,
    ContractMenu,
    DomainError,
    MarketParams,
    constraint_slacks,
    exp_cdf,
    fsd_dominates,
    operator_profit,
    reservation_value,
)
from specres.grid import (
    AlreadyReleased,
    Booking,
    BookingState,
    CapacityExceeded,
    ChannelCostModel,
    CostKind,
    DemandModel,
    LedgerError,
    ReservationLedger,
    SlotProportion,
    TFGrid,
    UnknownBooking,
    channel_cost,
    generate_grid,
    grid_from_text,
    grid_to_text,
    ledger_from_text,
    ledger_to_text,
    per_slot_proportions,
    time_average_cost,
)
from specres.sim import (
    ContractChoice,
    SimConfig,
    SimReport,
    choose_contract,
    ic_empirical_check,
    numeric_profit_oracle,
    simulate,
)
from specres.solver import (
    DegenerateMarket,
    ExistenceViolated,
    SolveMode,
    SolveResult,
    SolverError,
    TypesIndistinguishable,
    advance_payments,
    default_r_max,
    existence_threshold,
    first_best,
    fixed_point_residual,
    rebate_mc,
    rebate_nonmc_closed_form,
    rebate_nonmc_fixed_points,
    rebate_nonmc_numeric,
    relaxed_objective,
    solve,
    verify_ic_nc,
)

__version__ = "0.1.0"

__all__ = [
    "FEASIBILITY_EPS",
    "AlreadyReleased",
    "Booking",
    "BookingState",
    "CapacityExceeded",
    "ChannelCostModel",
    "ConstraintReport",
    "ContractChoice",
    "ContractMenu",
    "CostKind",
    "DegenerateMarket",
    "DemandModel",
    "DomainError",
    "ExistenceViolated",
    "LedgerError",
    "MarketParams",
    "ReservationLedger",
    "SimConfig",
    "SimReport",
    "SlotProportion",
    "SolveMode",
    "SolveResult",
    "SolverError",
    "TFGrid",
    "TypesIndistinguishable",
    "UnknownBooking",
    "advance_payments",
    "channel_cost",
    "choose_contract",
    "constraint_slacks",
    "default_r_max",
    "exp_cdf",
    "existence_threshold",
    "first_best",
    "fixed_point_residual",
    "fsd_dominates",
    "generate_grid",
    "grid_from_text",
    "grid_to_text",
    "ic_empirical_check",
    "ledger_from_text",
    "ledger_to_text",
    "numeric_profit_oracle",
    "operator_profit",
    "per_slot_proportions",
    "rebate_mc",
    "rebate_nonmc_closed_form",
    "rebate_nonmc_fixed_points",
    "rebate_nonmc_numeric",
    "relaxed_objective",
    "reservation_value",
    "simulate",
    "solve",
    "time_average_cost",
    "verify_ic_nc",
]
