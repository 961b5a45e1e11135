"""
Fix-and-propagate heuristic
Orchestrates initial LP, variable ordering, the dive and the final LP
"""

import logging
import math
import time
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .config import HeuristicConfig, InitialLpMethod
from .models.instance import MipInstance, check_feasibility, gap_percent
from .models.lp_solution import LpSolution, LpStatus
from .models.report import ComponentTimings, RunReport
from .services.dive import dfs_search
from .services.highs import highs_solve
from .services.mps import read_mps
from .services.ordering import order_variables
from .services.pdhg import pdhg_solve
from .services.propagation import build_clique_table

logger = logging.getLogger(__name__)

# FolpConfig needs a positive limit even when the budget is spent
MIN_PHASE_TIME = 1e-3


class FixPropHeuristic:
    """
    LP-guided fix-and-propagate primal heuristic

    Pipeline:
    1. Solve the LP relaxation at low accuracy
    2. Order the integer variables by the configured strategy
    3. Dive: fix, propagate, backtrack on infeasibility
    4. Fix all integers and solve the remaining LP at high accuracy
    5. Check the combined point against the original instance
    """

    def __init__(self, config: Optional[HeuristicConfig] = None):
        self.config = config or HeuristicConfig()

    def _remaining(self, started: float) -> float:
        if math.isinf(self.config.time_limit):
            return math.inf
        return max(self.config.time_limit - (time.perf_counter() - started), MIN_PHASE_TIME)

    def solve_initial_lp(self, instance: MipInstance, time_limit: float = math.inf) -> LpSolution:
        if self.config.initial_lp_method is InitialLpMethod.HIGHS:
            return highs_solve(instance, time_limit=time_limit)
        return pdhg_solve(instance, self.config.initial_lp_config(time_limit=time_limit))

    def solve_final_lp(
        self, instance: MipInstance, assignment: np.ndarray, time_limit: float = math.inf
    ) -> LpSolution:
        """
        LP over the continuous variables with every integer fixed to ``assignment``

        Propagation can pass an assignment whose LP has no feasible point, and
        PDHG then runs to its iteration limit. With ``final_lp_feasibility_check``
        HiGHS settles that case first and its infeasible answer is returned.
        """
        ints = instance.is_integer
        fixed = instance.with_bounds(
            np.where(ints, assignment, instance.col_lower),
            np.where(ints, assignment, instance.col_upper),
        )
        if self.config.final_lp_feasibility_check and not ints.all():
            check = highs_solve(fixed, time_limit=time_limit)
            if check.status is LpStatus.PRIMAL_INFEASIBLE_GUESS:
                logger.info("[%s] fixed LP is infeasible, PDHG skipped", instance.name)
                return check
        return pdhg_solve(fixed, self.config.final_lp_config(time_limit=time_limit))

    def run(
        self,
        instance: MipInstance,
        reference: Optional[float] = None,
        reading_time: float = 0.0,
        permutation: int = 0,
    ) -> RunReport:
        """
        Run the heuristic on one instance

        Args:
            instance: MIP to solve
            reference: known optimum in the original objective sense
            reading_time: seconds spent loading the instance
            permutation: permutation seed, recorded in the report

        Returns:
            RunReport; aborts are recorded in its status, never raised
        """
        cfg = self.config
        started = time.perf_counter()
        timings = {"reading": reading_time}
        report = {
            "instance": instance.name,
            "permutation": permutation,
            "strategy": cfg.strategy.value,
            "tiebreaker": cfg.tiebreaker.value,
            "initial_tolerance": cfg.initial_tolerance,
            "final_tolerance": cfg.final_tolerance,
            "seed": cfg.seed,
            "initial_lp_method": cfg.initial_lp_method.value,
            "reference": reference,
        }

        def finish(status: str, **fields) -> RunReport:
            timings["total"] = reading_time + time.perf_counter() - started
            logger.info("[%s] %s", instance.name, status)
            return RunReport(status=status, timings=ComponentTimings(**timings), **report, **fields)

        ints = instance.integer_indices
        initial_lp = None
        if ints.size == 0 or np.all(instance.col_lower[ints] == instance.col_upper[ints]):
            logger.info("[%s] all integers fixed by bounds, solving final LP only", instance.name)
            assignment = np.where(instance.is_integer, instance.col_lower, np.nan)
            report.update(nodes=0, backtracks=0)
        else:
            logger.info("[%s] initial LP (%s, tol=%g)", instance.name, cfg.initial_lp_method.value, cfg.initial_tolerance)
            t0 = time.perf_counter()
            initial_lp = self.solve_initial_lp(instance, self._remaining(started))
            timings["initial_lp"] = time.perf_counter() - t0
            report.update(initial_lp_iterations=initial_lp.iterations, initial_lp_status=initial_lp.status.value)
            if initial_lp.status is LpStatus.PRIMAL_INFEASIBLE_GUESS:
                return finish("initial_lp_infeasible", message="initial LP looks infeasible")

            logger.info("[%s] fix-and-propagate with %s/%s", instance.name, cfg.strategy.value, cfg.tiebreaker.value)
            t0 = time.perf_counter()
            order = order_variables(
                instance, initial_lp, cfg.strategy, cfg.tiebreaker, cfg.seed, cfg.frac_descending
            )
            cliques = build_clique_table(instance)
            outcome = dfs_search(
                instance, cliques, order, initial_lp, cfg, time_limit=self._remaining(started)
            )
            timings["fix_and_propagate"] = time.perf_counter() - t0
            report.update(nodes=outcome.nodes, backtracks=outcome.backtracks)
            if not outcome.found:
                return finish(outcome.status.value)
            assignment = outcome.assignment

        logger.info("[%s] final LP (tol=%g)", instance.name, cfg.final_tolerance)
        t0 = time.perf_counter()
        final_lp = self.solve_final_lp(instance, assignment, self._remaining(started))
        timings["final_lp"] = time.perf_counter() - t0
        report.update(final_lp_iterations=final_lp.iterations, final_lp_status=final_lp.status.value)
        if final_lp.status is LpStatus.PRIMAL_INFEASIBLE_GUESS:
            return finish("final_lp_infeasible", message="LP over the fixed integers looks infeasible")

        x = np.where(instance.is_integer, assignment, final_lp.x)
        solution = check_feasibility(instance, x, cfg.feasibility_tolerance)
        max_violation = max(
            solution.max_row_violation, solution.max_bound_violation, solution.max_integrality_violation
        )
        if not solution.feasible:
            return finish(
                "infeasible_solution",
                max_violation=max_violation,
                message=f"final point violates the instance by {max_violation:.3e}",
            )

        objective = instance.report_objective(solution.objective)
        if reference is None and initial_lp is not None:
            reference = instance.report_objective(initial_lp.primal_objective)
        gap = gap_percent(objective, reference) if reference is not None and math.isfinite(reference) else 0.0
        return finish("found", found=True, objective=objective, gap=gap, max_violation=max_violation)

    def run_file(self, path: Union[str, Path], reference: Optional[float] = None) -> RunReport:
        """Read an MPS file and run on it, timing the read"""
        t0 = time.perf_counter()
        instance = read_mps(path)
        return self.run(instance, reference=reference, reading_time=time.perf_counter() - t0)

    @classmethod
    def from_env(cls) -> "FixPropHeuristic":
        """Create heuristic from environment variables"""
        return cls(config=HeuristicConfig.from_env())


def run_heuristic(
    instance: MipInstance, config: Optional[HeuristicConfig] = None, reference: Optional[float] = None
) -> RunReport:
    """Run the fix-and-propagate heuristic once on ``instance``"""
    return FixPropHeuristic(config).run(instance, reference=reference)
