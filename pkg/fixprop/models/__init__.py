"""Data models for fixprop"""

from .instance import MipInstance, MipSolution, check_feasibility, gap_percent, lp_relaxation
from .lp_solution import LpSolution, LpStatus
from .report import ComponentTimings, RunReport

__all__ = [
    "MipInstance",
    "MipSolution",
    "check_feasibility",
    "gap_percent",
    "lp_relaxation",
    "LpSolution",
    "LpStatus",
    "ComponentTimings",
    "RunReport",
]
