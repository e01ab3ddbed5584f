"""Discrete network min-pricing: models, solvers, and a benchmark harness.

A supplier posts one price per outlet on a fixed grid; each demand node
buys from its cheapest connected outlet, either matching the local
competitor's price or undercutting it. The package covers the base model
with two-level demand response and a binary-logit variant, exact solvers,
a structural price-ladder dynamic program, construction heuristics, two
integer-programming formulations with a pluggable external solver, a
seeded instance generator, and a reproducible benchmark runner.
"""

from .bench import (
    ConfigError,
    PmStats,
    RunRecord,
    cross_model_gap,
    gain_over_sp,
    load_config,
    opt_gap,
    pm_accounting,
    read_runs_csv,
    records_from_csv,
    run_suite,
    summarise,
    write_runs_csv,
    write_summary,
)
from .exact import (
    ENUMERATION_LIMIT,
    LADDER_OUTLET_LIMIT,
    EnumerationTooLarge,
    TooManyOutlets,
    brute_force,
    ladder_exact,
)
from .heuristics import (
    ALGORITHMS,
    HeuristicResult,
    HeuristicTimeout,
    best_insertion,
    full_insertion,
    greedy_select,
    insert_outlet,
    insertion_with_order,
    order_select,
    run_algorithm,
    single_price,
)
from .instgen import (
    FORMAT_MARKER,
    GenParams,
    InstanceFormatError,
    generate,
    instance_from_doc,
    instance_label,
    instance_to_doc,
    load_instance,
    make_grid,
    paper_grid,
    save_instance,
)
from .ladder import DP_CALLS, allocate, dp_prices, ladder_revenue
from .mip import (
    BUILTIN_SOLVER,
    SOLVER_ENV_VAR,
    LinearModel,
    SolveOutcome,
    SolverAdapter,
    SolverUnavailable,
    build_ip1,
    build_ip2,
    build_model,
    builtin_adapter,
    lp_text,
    read_lp,
    relax,
    relax_order,
    resolve_adapter,
    solve_external,
    solve_ip,
    write_lp,
)
from .model import (
    BMNPP,
    MNPP,
    MODELS,
    PM,
    PW,
    DemandNode,
    Edge,
    Instance,
    InvalidInstance,
    PriceGrid,
    adjacency,
    demand_at,
    demand_bmnpp,
    demand_mnpp,
    evaluate_prices,
    logit_share,
    price_below,
    revenue_table,
    validate_prices,
    zero_revenue,
)
from .money import (
    MONEY_SCALE,
    Money,
    MoneyError,
    fraction_str,
    money_float,
    money_str,
    money_unit,
    number_str,
    parse_fraction,
    parse_money,
)
from .rng import Rng, derive_seed

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BMNPP",
    "BUILTIN_SOLVER",
    "ConfigError",
    "DP_CALLS",
    "DemandNode",
    "ENUMERATION_LIMIT",
    "Edge",
    "EnumerationTooLarge",
    "FORMAT_MARKER",
    "GenParams",
    "HeuristicResult",
    "HeuristicTimeout",
    "Instance",
    "InstanceFormatError",
    "InvalidInstance",
    "LADDER_OUTLET_LIMIT",
    "LinearModel",
    "MNPP",
    "MODELS",
    "MONEY_SCALE",
    "Money",
    "MoneyError",
    "PM",
    "PW",
    "PmStats",
    "PriceGrid",
    "Rng",
    "RunRecord",
    "SOLVER_ENV_VAR",
    "SolveOutcome",
    "SolverAdapter",
    "SolverUnavailable",
    "TooManyOutlets",
    "adjacency",
    "allocate",
    "best_insertion",
    "brute_force",
    "build_ip1",
    "build_ip2",
    "build_model",
    "builtin_adapter",
    "cross_model_gap",
    "demand_at",
    "demand_bmnpp",
    "demand_mnpp",
    "derive_seed",
    "dp_prices",
    "evaluate_prices",
    "fraction_str",
    "full_insertion",
    "gain_over_sp",
    "generate",
    "greedy_select",
    "insert_outlet",
    "insertion_with_order",
    "instance_from_doc",
    "instance_label",
    "instance_to_doc",
    "ladder_exact",
    "ladder_revenue",
    "load_config",
    "load_instance",
    "logit_share",
    "lp_text",
    "make_grid",
    "money_float",
    "money_str",
    "money_unit",
    "number_str",
    "opt_gap",
    "order_select",
    "paper_grid",
    "parse_fraction",
    "parse_money",
    "pm_accounting",
    "price_below",
    "read_lp",
    "read_runs_csv",
    "records_from_csv",
    "relax",
    "relax_order",
    "resolve_adapter",
    "revenue_table",
    "run_algorithm",
    "run_suite",
    "save_instance",
    "single_price",
    "solve_external",
    "solve_ip",
    "summarise",
    "validate_prices",
    "write_lp",
    "write_runs_csv",
    "write_summary",
    "zero_revenue",
]
