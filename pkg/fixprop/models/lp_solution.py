"""LP solve result produced by the first-order solver"""

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np


class LpStatus(str, Enum):
    OPTIMAL = "Optimal"
    ITER_LIMIT = "IterLimit"
    TIME_LIMIT = "TimeLimit"
    PRIMAL_INFEASIBLE_GUESS = "PrimalInfeasibleGuess"


@dataclass(frozen=True, eq=False)
class LpSolution:
    """
    Primal/dual iterate of an LP relaxation

    Residuals follow the relative measures of ``fixprop.services.pdhg.residuals``;
    objectives are in the internal (minimisation) sense.
    """

    x: np.ndarray
    y: np.ndarray
    reduced_costs: np.ndarray
    primal_objective: float = float("nan")
    dual_objective: float = float("nan")
    primal_residual: float = float("inf")
    dual_residual: float = float("inf")
    relative_gap: float = float("inf")
    iterations: int = 0
    status: LpStatus = LpStatus.ITER_LIMIT
    solve_time: float = 0.0
    restart_measures: Tuple[float, ...] = ()

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL

    @property
    def restarts(self) -> int:
        return len(self.restart_measures)

    def summary(self) -> dict:
        """Convert to dictionary for JSON serialization"""
        return {
            "status": self.status.value,
            "primal_objective": self.primal_objective,
            "dual_objective": self.dual_objective,
            "primal_residual": self.primal_residual,
            "dual_residual": self.dual_residual,
            "relative_gap": self.relative_gap,
            "iterations": self.iterations,
            "restarts": self.restarts,
        }
