"""
Restarted primal-dual hybrid gradient (PDHG) solver for LP relaxations

Solves  min c^T x  s.t.  L <= A x <= U,  l <= x <= u  through the saddle point
problem  min_x max_y  c^T x - y^T A x - p(y)  with  p(y) = max_{s in [L, U]} -y^T s.
Row duals are sign-constrained by the finite row bounds: y_i > 0 only if
L_i is finite, y_i < 0 only if U_i is finite. Reduced costs are r = c - A^T y.

Termination uses three relative measures:

    primal residual  ||dist(A x, [L, U])||_2 / (1 + max(||L_fin||_2, ||U_fin||_2))
    dual residual    ||(r - lambda, y - proj(y))||_2 / (1 + ||c||_2)
    gap              |p_obj - d_obj| / (1 + |p_obj| + |d_obj|)

where lambda is r projected onto the sign cone of the finite variable bounds.
"""

import logging
import math
import time
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from ..config import FolpConfig
from ..errors import DimensionError, SolverError
from ..models.instance import MipInstance
from ..models.lp_solution import LpSolution, LpStatus
from .scaling import Scaling, estimate_norm, rescale

logger = logging.getLogger(__name__)


class Residuals(NamedTuple):
    primal: float
    dual: float
    gap: float


class LpMeasures(NamedTuple):
    """Residuals and both objectives of one primal-dual pair"""

    residuals: Residuals
    primal_objective: float
    dual_objective: float

    @property
    def kkt(self) -> float:
        p, d, g = self.residuals
        return math.sqrt(p * p + d * d + g * g)

    def within(self, tolerance: float) -> bool:
        return all(value <= tolerance for value in self.residuals)


@dataclass(frozen=True, eq=False)
class _LpData:
    """Arrays of one LP in the form the iteration works on"""

    c: np.ndarray
    A: sp.csr_matrix
    At: sp.csr_matrix
    row_lower: np.ndarray
    row_upper: np.ndarray
    col_lower: np.ndarray
    col_upper: np.ndarray
    offset: float

    @classmethod
    def from_instance(cls, instance: MipInstance) -> "_LpData":
        return cls(
            c=np.asarray(instance.c, dtype=float),
            A=instance.A,
            At=instance.A_csc.T.tocsr(),
            row_lower=np.asarray(instance.row_lower, dtype=float),
            row_upper=np.asarray(instance.row_upper, dtype=float),
            col_lower=np.asarray(instance.col_lower, dtype=float),
            col_upper=np.asarray(instance.col_upper, dtype=float),
            offset=instance.objective_offset,
        )

    def scaled(self, scaling: Scaling) -> "_LpData":
        A = scaling.matrix
        return _LpData(
            c=self.c * scaling.col,
            A=A,
            At=A.T.tocsr(),
            row_lower=self.row_lower * scaling.row,
            row_upper=self.row_upper * scaling.row,
            col_lower=self.col_lower / scaling.col,
            col_upper=self.col_upper / scaling.col,
            offset=self.offset,
        )

    @property
    def bound_norm(self) -> float:
        lower = self.row_lower[np.isfinite(self.row_lower)]
        upper = self.row_upper[np.isfinite(self.row_upper)]
        return max(float(np.linalg.norm(lower)), float(np.linalg.norm(upper)))


def _project_duals(y: np.ndarray, row_lower: np.ndarray, row_upper: np.ndarray) -> np.ndarray:
    """Clamp row duals onto the sign cone of their finite row bounds"""
    projected = y.copy()
    projected[(projected > 0) & ~np.isfinite(row_lower)] = 0.0
    projected[(projected < 0) & ~np.isfinite(row_upper)] = 0.0
    return projected


def _bound_duals(r: np.ndarray, col_lower: np.ndarray, col_upper: np.ndarray) -> np.ndarray:
    """Reduced costs projected onto the sign cone of the finite variable bounds"""
    return _project_duals(r, col_lower, col_upper)


def _support_value(duals: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> float:
    """sum of lower*d over d > 0 plus upper*d over d < 0 (duals already cone-feasible)"""
    pos = duals > 0
    neg = duals < 0
    return float(lower[pos] @ duals[pos] + upper[neg] @ duals[neg])


def _evaluate(data: _LpData, x: np.ndarray, y: np.ndarray, Ax: Optional[np.ndarray] = None) -> LpMeasures:
    if Ax is None:
        Ax = data.A @ x
    r = data.c - data.At @ y

    violation = np.maximum(data.row_lower - Ax, 0.0) + np.maximum(Ax - data.row_upper, 0.0)
    primal_residual = float(np.linalg.norm(violation)) / (1.0 + data.bound_norm)

    # row duals outside their sign set count toward the dual residual
    y_proj = _project_duals(y, data.row_lower, data.row_upper)
    lam = _bound_duals(r, data.col_lower, data.col_upper)
    dual_violation = math.hypot(float(np.linalg.norm(r - lam)), float(np.linalg.norm(y - y_proj)))
    dual_residual = dual_violation / (1.0 + float(np.linalg.norm(data.c)))

    primal_objective = float(data.c @ x) + data.offset
    dual_objective = (
        _support_value(y_proj, data.row_lower, data.row_upper)
        + _support_value(lam, data.col_lower, data.col_upper)
        + data.offset
    )
    gap = abs(primal_objective - dual_objective) / (1.0 + abs(primal_objective) + abs(dual_objective))
    return LpMeasures(Residuals(primal_residual, dual_residual, gap), primal_objective, dual_objective)


def _check_dimensions(instance: MipInstance, x: Optional[np.ndarray], y: np.ndarray) -> None:
    if x is not None and np.shape(x) != (instance.num_cols,):
        raise DimensionError(f"x has shape {np.shape(x)}, expected ({instance.num_cols},)")
    if np.shape(y) != (instance.num_rows,):
        raise DimensionError(f"y has shape {np.shape(y)}, expected ({instance.num_rows},)")


def reduced_costs(instance: MipInstance, y: np.ndarray) -> np.ndarray:
    """r = c - A^T y"""
    y = np.asarray(y, dtype=float)
    _check_dimensions(instance, None, y)
    return instance.c - instance.A_csc.T @ y


def evaluate(instance: MipInstance, x: np.ndarray, y: np.ndarray) -> LpMeasures:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_dimensions(instance, x, y)
    return _evaluate(_LpData.from_instance(instance), x, y)


def residuals(instance: MipInstance, x: np.ndarray, y: np.ndarray) -> Residuals:
    """Relative primal residual, dual residual and gap of (x, y)"""
    return evaluate(instance, x, y).residuals


def _make_solution(
    instance: MipInstance,
    x: np.ndarray,
    y: np.ndarray,
    evaluation: LpMeasures,
    iterations: int,
    status: LpStatus,
    started: float,
    restart_measures: Tuple[float, ...],
) -> LpSolution:
    return LpSolution(
        x=x,
        y=y,
        reduced_costs=reduced_costs(instance, y),
        primal_objective=evaluation.primal_objective,
        dual_objective=evaluation.dual_objective,
        primal_residual=evaluation.residuals.primal,
        dual_residual=evaluation.residuals.dual,
        relative_gap=evaluation.residuals.gap,
        iterations=iterations,
        status=status,
        solve_time=time.perf_counter() - started,
        restart_measures=restart_measures,
    )


def _solve_without_matrix(instance: MipInstance, config: FolpConfig, started: float) -> LpSolution:
    """No nonzeros: every variable moves to its objective-preferred bound"""
    c = instance.c
    preferred = np.where(c > 0, instance.col_lower, np.where(c < 0, instance.col_upper, 0.0))
    unbounded = ~np.isfinite(preferred)
    x = np.clip(np.where(unbounded, 0.0, preferred), instance.col_lower, instance.col_upper)
    y = np.zeros(instance.num_rows)
    evaluation = _evaluate(_LpData.from_instance(instance), x, y)

    rows_ok = bool(np.all((instance.row_lower <= 0.0) & (instance.row_upper >= 0.0)))
    if not rows_ok:
        status = LpStatus.PRIMAL_INFEASIBLE_GUESS
    elif unbounded.any() or not evaluation.within(config.tolerance):
        status = LpStatus.ITER_LIMIT
    else:
        status = LpStatus.OPTIMAL
    return _make_solution(instance, x, y, evaluation, 0, status, started, ())


def pdhg_solve(instance: MipInstance, config: Optional[FolpConfig] = None) -> LpSolution:
    """
    Solve the LP relaxation of an instance (integrality ignored)

    Args:
        instance: MIP whose relaxation is solved
        config: solver settings, defaults to the low-accuracy preset

    Returns:
        LpSolution in the original (unscaled) space

    Raises:
        SolverError: iterates became non-finite
    """
    config = config or FolpConfig()
    started = time.perf_counter()

    if instance.num_cols == 0 or instance.A.nnz == 0:
        return _solve_without_matrix(instance, config, started)

    original = _LpData.from_instance(instance)
    scaling = rescale(instance.A, config.ruiz_iterations, config.pock_chambolle_alpha)
    data = original.scaled(scaling)

    eta = config.step_size_factor / estimate_norm(data.A, config.power_iterations)
    omega = config.primal_weight
    tau, sigma = eta / omega, eta * omega

    def unscale(xs: np.ndarray, ys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return xs * scaling.col, ys * scaling.row

    x = np.clip(np.zeros(instance.num_cols), data.col_lower, data.col_upper)
    y = np.zeros(instance.num_rows)
    Ax = data.A @ x
    Aty = data.At @ y

    x_sum = np.zeros_like(x)
    y_sum = np.zeros_like(y)
    count = 0
    restart_x, restart_y = x.copy(), y.copy()
    last_restart_measure = _evaluate(data, x, y, Ax).kkt
    restart_measures = []

    status = LpStatus.ITER_LIMIT
    best = (x, y)
    iteration = 0

    while iteration < config.max_iterations:
        iteration += 1

        x_next = np.clip(x - tau * (data.c - Aty), data.col_lower, data.col_upper)
        Ax_next = data.A @ x_next
        v = y - sigma * (2.0 * Ax_next - Ax)
        y = v + sigma * np.clip(-v / sigma, data.row_lower, data.row_upper)
        x, Ax = x_next, Ax_next
        Aty = data.At @ y

        x_sum += x
        y_sum += y
        count += 1

        if iteration % config.check_frequency != 0 and iteration != config.max_iterations:
            continue

        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise SolverError(f"non-finite PDHG iterate at iteration {iteration}, check the data scaling")
        if max(np.abs(x).max(initial=0.0), np.abs(y).max(initial=0.0)) > config.divergence_threshold:
            status = LpStatus.PRIMAL_INFEASIBLE_GUESS
            best = (x, y)
            break

        x_avg, y_avg = x_sum / count, y_sum / count
        current = _evaluate(data, x, y, Ax)
        average = _evaluate(data, x_avg, y_avg)
        if average.kkt < current.kkt:
            candidates = [((x_avg, y_avg), average), ((x, y), current)]
        else:
            candidates = [((x, y), current), ((x_avg, y_avg), average)]
        (cand_x, cand_y), cand_eval = candidates[0]
        best = (cand_x, cand_y)

        for (xs, ys), _ in candidates:
            xo, yo = unscale(xs, ys)
            if _evaluate(original, xo, yo).within(config.tolerance):
                status = LpStatus.OPTIMAL
                best = (xs, ys)
                break
        if status is LpStatus.OPTIMAL:
            break

        if config.verbose:
            p, d, g = cand_eval.residuals
            logger.info(
                "iter=%d pres=%.3e dres=%.3e gap=%.3e kkt=%.3e restarts=%d",
                iteration, p, d, g, cand_eval.kkt, len(restart_measures),
            )

        if cand_eval.kkt <= config.restart_trigger * last_restart_measure:
            if config.adaptive_primal_weight:
                dx = float(np.linalg.norm(cand_x - restart_x))
                dy = float(np.linalg.norm(cand_y - restart_y))
                if dx > 1e-10 and dy > 1e-10:
                    theta = config.primal_weight_smoothing
                    omega = math.exp(theta * math.log(dy / dx) + (1.0 - theta) * math.log(omega))
                    tau, sigma = eta / omega, eta * omega
            x, y = cand_x.copy(), cand_y.copy()
            Ax = data.A @ x
            Aty = data.At @ y
            restart_x, restart_y = x.copy(), y.copy()
            x_sum[:] = 0.0
            y_sum[:] = 0.0
            count = 0
            last_restart_measure = cand_eval.kkt
            restart_measures.append(cand_eval.kkt)

        if time.perf_counter() - started > config.time_limit:
            status = LpStatus.TIME_LIMIT
            break

    x_out, y_out = unscale(*best)
    evaluation = _evaluate(original, x_out, y_out)
    if config.verbose:
        logger.info(
            "status=%s iterations=%d pobj=%.10e dobj=%.10e",
            status.value, iteration, evaluation.primal_objective, evaluation.dual_objective,
        )
    return _make_solution(
        instance, x_out, y_out, evaluation, iteration, status, started, tuple(restart_measures)
    )
