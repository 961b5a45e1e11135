"""Algorithmic services: MPS I/O, LP solvers, propagation and the dive"""

from .branching import BoundChange, branch, fixing_value
from .dive import SearchNode, SearchOutcome, SearchStatus, dfs_search
from .highs import highs_solve
from .mps import format_mps, parse_mps, read_mps, write_mps
from .ordering import FixingOrder, order_variables
from .pdhg import pdhg_solve, reduced_costs, residuals
from .propagation import CliqueTable, Domain, Literal, PropagationResult, build_clique_table, propagate

__all__ = [
    "BoundChange",
    "branch",
    "fixing_value",
    "SearchNode",
    "SearchOutcome",
    "SearchStatus",
    "dfs_search",
    "highs_solve",
    "format_mps",
    "parse_mps",
    "read_mps",
    "write_mps",
    "FixingOrder",
    "order_variables",
    "pdhg_solve",
    "reduced_costs",
    "residuals",
    "CliqueTable",
    "Domain",
    "Literal",
    "PropagationResult",
    "build_clique_table",
    "propagate",
]
