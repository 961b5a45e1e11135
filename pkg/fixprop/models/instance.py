"""
Mixed-integer instance model, LP relaxation, feasibility and gap accounting

Rows are two-sided (row_lower <= A x <= row_upper); the objective is always
minimised. Instances read from maximisation problems carry ``maximize=True``
and a negated objective, which ``report_objective`` undoes.
"""

import dataclasses
from dataclasses import InitVar, dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from ..errors import DimensionError, InstanceError

INTEGRALITY_ROUNDING_TOL = 1e-9
GAP_REFERENCE_FLOOR = 1e-10
GAP_CAP_PERCENT = 1e6


def _as_vector(values, length: int, label: str) -> np.ndarray:
    vec = np.array(values, dtype=float).reshape(-1)
    if vec.shape[0] != length:
        raise DimensionError(f"{label} has length {vec.shape[0]}, expected {length}")
    if np.isnan(vec).any():
        raise InstanceError(f"{label} contains NaN")
    return vec


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class MipInstance:
    """
    Sparse MIP in two-sided row form

    Immutable after construction; the CSR and CSC views hold the same matrix.
    Integer bounds are rounded inward on construction.
    """

    c: np.ndarray
    A: sp.csr_matrix
    row_lower: np.ndarray
    row_upper: np.ndarray
    col_lower: np.ndarray
    col_upper: np.ndarray
    is_integer: np.ndarray
    name: str = "instance"
    row_names: Tuple[str, ...] = ()
    col_names: Tuple[str, ...] = ()
    objective_offset: float = 0.0
    maximize: bool = False
    A_csc: sp.csc_matrix = field(init=False, repr=False)

    def __post_init__(self):
        A = sp.csr_matrix(self.A, dtype=float, copy=True)
        A.sum_duplicates()
        A.eliminate_zeros()
        A.sort_indices()
        m, n = A.shape

        if not np.isfinite(A.data).all():
            raise InstanceError("constraint matrix contains non-finite coefficients")

        c = _as_vector(self.c, n, "objective")
        if not np.isfinite(c).all():
            raise InstanceError("objective contains non-finite coefficients")
        row_lower = _as_vector(self.row_lower, m, "row_lower")
        row_upper = _as_vector(self.row_upper, m, "row_upper")
        col_lower = _as_vector(self.col_lower, n, "col_lower")
        col_upper = _as_vector(self.col_upper, n, "col_upper")

        is_integer = np.array(self.is_integer, dtype=bool).reshape(-1)
        if is_integer.shape[0] != n:
            raise DimensionError(f"is_integer has length {is_integer.shape[0]}, expected {n}")

        # Round integer bounds inward
        col_lower[is_integer] = np.ceil(col_lower[is_integer] - INTEGRALITY_ROUNDING_TOL)
        col_upper[is_integer] = np.floor(col_upper[is_integer] + INTEGRALITY_ROUNDING_TOL)

        bad_rows = np.flatnonzero((row_lower > row_upper) | (row_lower == np.inf) | (row_upper == -np.inf))
        if bad_rows.size:
            i = int(bad_rows[0])
            raise InstanceError(f"row {i} has inconsistent bounds [{row_lower[i]}, {row_upper[i]}]")
        bad_cols = np.flatnonzero((col_lower > col_upper) | (col_lower == np.inf) | (col_upper == -np.inf))
        if bad_cols.size:
            j = int(bad_cols[0])
            raise InstanceError(f"column {j} has inconsistent bounds [{col_lower[j]}, {col_upper[j]}]")

        row_names = tuple(self.row_names) if self.row_names else tuple(f"R{i}" for i in range(m))
        col_names = tuple(self.col_names) if self.col_names else tuple(f"C{j}" for j in range(n))
        if len(row_names) != m or len(col_names) != n:
            raise DimensionError("name lists do not match the matrix shape")

        object.__setattr__(self, "A", A)
        object.__setattr__(self, "A_csc", A.tocsc())
        object.__setattr__(self, "c", _freeze(c))
        object.__setattr__(self, "row_lower", _freeze(row_lower))
        object.__setattr__(self, "row_upper", _freeze(row_upper))
        object.__setattr__(self, "col_lower", _freeze(col_lower))
        object.__setattr__(self, "col_upper", _freeze(col_upper))
        object.__setattr__(self, "is_integer", _freeze(is_integer))
        object.__setattr__(self, "row_names", row_names)
        object.__setattr__(self, "col_names", col_names)
        object.__setattr__(self, "objective_offset", float(self.objective_offset))

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    @property
    def num_cols(self) -> int:
        return self.A.shape[1]

    @property
    def integer_indices(self) -> np.ndarray:
        return np.flatnonzero(self.is_integer)

    @property
    def num_integers(self) -> int:
        return int(self.is_integer.sum())

    @property
    def is_binary(self) -> np.ndarray:
        return self.is_integer & (self.col_lower >= 0.0) & (self.col_upper <= 1.0)

    def objective_value(self, x: np.ndarray) -> float:
        return float(self.c @ x) + self.objective_offset

    def report_objective(self, value: Optional[float]) -> Optional[float]:
        """Translate an internal (minimisation) objective to the original sense"""
        if value is None:
            return None
        return -value if self.maximize else value

    def with_bounds(self, col_lower: Sequence[float], col_upper: Sequence[float]) -> "MipInstance":
        return dataclasses.replace(self, col_lower=col_lower, col_upper=col_upper)


def lp_relaxation(instance: MipInstance) -> MipInstance:
    """Same instance with the integrality set emptied"""
    if not instance.is_integer.any():
        return instance
    return dataclasses.replace(instance, is_integer=np.zeros(instance.num_cols, dtype=bool))


def _scaled_excess(values: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """Violation of [lower, upper], each divided by 1 + |violated bound|"""
    excess = np.zeros_like(values)
    below = values < lower
    above = values > upper
    excess[below] = (lower[below] - values[below]) / (1.0 + np.abs(lower[below]))
    excess[above] = (values[above] - upper[above]) / (1.0 + np.abs(upper[above]))
    return excess


@dataclass(frozen=True, eq=False)
class MipSolution:
    """Primal point with its objective and relative violations"""

    instance: InitVar[MipInstance]
    x: np.ndarray
    tolerance: float = 1e-6
    objective: float = field(init=False)
    max_row_violation: float = field(init=False)
    max_bound_violation: float = field(init=False)
    max_integrality_violation: float = field(init=False)

    def __post_init__(self, instance: MipInstance):
        x = np.array(self.x, dtype=float).reshape(-1)
        if x.shape[0] != instance.num_cols:
            raise DimensionError(f"solution has length {x.shape[0]}, expected {instance.num_cols}")
        x.flags.writeable = False

        activity = instance.A @ x
        row_viol = _scaled_excess(activity, instance.row_lower, instance.row_upper)
        bound_viol = _scaled_excess(x, instance.col_lower, instance.col_upper)
        ints = x[instance.is_integer]
        int_viol = np.abs(ints - np.round(ints))

        object.__setattr__(self, "x", x)
        object.__setattr__(self, "objective", instance.objective_value(x))
        object.__setattr__(self, "max_row_violation", float(row_viol.max(initial=0.0)))
        object.__setattr__(self, "max_bound_violation", float(bound_viol.max(initial=0.0)))
        object.__setattr__(self, "max_integrality_violation", float(int_viol.max(initial=0.0)))

    @property
    def feasible(self) -> bool:
        return (
            self.max_row_violation <= self.tolerance
            and self.max_bound_violation <= self.tolerance
            and self.max_integrality_violation <= self.tolerance
        )


def check_feasibility(instance: MipInstance, x: np.ndarray, rel_tol: float = 1e-6) -> MipSolution:
    """Evaluate x against rows, bounds and integrality at a relative tolerance"""
    return MipSolution(instance, x, rel_tol)


def gap_percent(obj: float, reference: float) -> float:
    """Sign-free percentage gap, capped for degenerate references"""
    gap = 100.0 * abs(obj - reference) / max(abs(reference), GAP_REFERENCE_FLOOR)
    return min(gap, GAP_CAP_PERCENT)
