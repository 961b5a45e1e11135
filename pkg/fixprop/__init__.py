"""
fixprop: LP-guided fix-and-propagate heuristic for mixed-integer programs

The heuristic solves the LP relaxation with a restarted PDHG method, fixes
integer variables one at a time in an LP-derived order with domain
propagation after every fixing, and recovers the continuous part with a
high-accuracy LP once all integers are fixed.

Usage:
    from fixprop import FixPropHeuristic, HeuristicConfig, read_mps

    instance = read_mps("markshare_4_0.mps.gz")
    heuristic = FixPropHeuristic(HeuristicConfig(strategy="redcost", tiebreaker="frac"))
    report = heuristic.run(instance)
    print(report.status, report.objective, report.gap)

    # LP relaxation only
    from fixprop import FolpConfig, pdhg_solve

    lp = pdhg_solve(instance, FolpConfig(tolerance=1e-6))
"""

from .config import FolpConfig, HeuristicConfig, InitialLpMethod, Tiebreaker, VariableStrategy
from .errors import (
    BranchingError,
    DimensionError,
    FixPropError,
    InstanceError,
    MpsFormatError,
    SolverError,
    StrategyError,
)
from .heuristic import FixPropHeuristic, run_heuristic
from .models import (
    ComponentTimings,
    LpSolution,
    LpStatus,
    MipInstance,
    MipSolution,
    RunReport,
    check_feasibility,
    gap_percent,
    lp_relaxation,
)
from .services import (
    branch,
    build_clique_table,
    dfs_search,
    fixing_value,
    order_variables,
    parse_mps,
    pdhg_solve,
    propagate,
    read_mps,
    reduced_costs,
    residuals,
    write_mps,
)

__version__ = "0.3.0"
__all__ = [
    "FolpConfig",
    "HeuristicConfig",
    "InitialLpMethod",
    "Tiebreaker",
    "VariableStrategy",
    "BranchingError",
    "DimensionError",
    "FixPropError",
    "InstanceError",
    "MpsFormatError",
    "SolverError",
    "StrategyError",
    "FixPropHeuristic",
    "run_heuristic",
    "ComponentTimings",
    "LpSolution",
    "LpStatus",
    "MipInstance",
    "MipSolution",
    "RunReport",
    "check_feasibility",
    "gap_percent",
    "lp_relaxation",
    "branch",
    "build_clique_table",
    "dfs_search",
    "fixing_value",
    "order_variables",
    "parse_mps",
    "pdhg_solve",
    "propagate",
    "read_mps",
    "reduced_costs",
    "residuals",
    "write_mps",
]
