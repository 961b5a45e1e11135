"""Initial LP through scipy's HiGHS backend, as an alternative to PDHG"""

import logging
import math
import time

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from ..models.instance import MipInstance
from ..models.lp_solution import LpSolution, LpStatus
from .pdhg import evaluate, reduced_costs

logger = logging.getLogger(__name__)

_STATUS = {
    0: LpStatus.OPTIMAL,
    1: LpStatus.ITER_LIMIT,
    2: LpStatus.PRIMAL_INFEASIBLE_GUESS,
}


def _bound(value: float):
    return float(value) if math.isfinite(value) else None


def highs_solve(instance: MipInstance, time_limit: float = math.inf) -> LpSolution:
    """
    Solve the LP relaxation with HiGHS and map its duals to the PDHG convention

    Ranged rows are split into a <= part and a negated >= part; the row dual
    is y_i = mu_upper_i - mu_lower_i so that y_i > 0 means the lower row bound
    is active.
    """
    started = time.perf_counter()
    A = instance.A
    L, U = instance.row_lower, instance.row_upper

    is_eq = np.isfinite(L) & (L == U)
    has_upper = np.isfinite(U) & ~is_eq
    has_lower = np.isfinite(L) & ~is_eq
    upper_rows = np.flatnonzero(has_upper)
    lower_rows = np.flatnonzero(has_lower)
    eq_rows = np.flatnonzero(is_eq)

    A_ub = sp.vstack([A[upper_rows], -A[lower_rows]], format="csr")
    b_ub = np.concatenate([U[upper_rows], -L[lower_rows]])
    bounds = [(_bound(lo), _bound(hi)) for lo, hi in zip(instance.col_lower, instance.col_upper)]
    options = {"time_limit": time_limit} if math.isfinite(time_limit) else {}

    result = linprog(
        instance.c,
        A_ub=A_ub if A_ub.shape[0] else None,
        b_ub=b_ub if A_ub.shape[0] else None,
        A_eq=A[eq_rows] if len(eq_rows) else None,
        b_eq=L[eq_rows] if len(eq_rows) else None,
        bounds=bounds,
        method="highs",
        options=options,
    )
    status = _STATUS.get(result.status, LpStatus.ITER_LIMIT)
    if result.status == 1 and "time" in str(result.message).lower():
        status = LpStatus.TIME_LIMIT

    y = np.zeros(instance.num_rows)
    if result.x is None:
        x = np.clip(np.zeros(instance.num_cols), instance.col_lower, instance.col_upper)
    else:
        x = np.asarray(result.x, dtype=float)
        if len(upper_rows) or len(lower_rows):
            marginals = np.asarray(result.ineqlin.marginals, dtype=float)
            y[upper_rows] += marginals[: len(upper_rows)]
            y[lower_rows] -= marginals[len(upper_rows):]
        if len(eq_rows):
            y[eq_rows] = np.asarray(result.eqlin.marginals, dtype=float)

    measures = evaluate(instance, x, y)
    logger.debug("highs: %s (%s)", status.value, result.message)
    return LpSolution(
        x=x,
        y=y,
        reduced_costs=reduced_costs(instance, y),
        primal_objective=measures.primal_objective,
        dual_objective=measures.dual_objective,
        primal_residual=measures.residuals.primal,
        dual_residual=measures.residuals.dual,
        relative_gap=measures.residuals.gap,
        iterations=int(getattr(result, "nit", 0) or 0),
        status=status,
        solve_time=time.perf_counter() - started,
    )
