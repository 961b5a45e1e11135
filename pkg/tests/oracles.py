"""
Reference solvers and instance generators for the test suite

Brute force over 0/1 points, vertex enumeration for tiny LPs, and HiGHS
(through scipy's linprog and milp) for everything larger.
"""

import itertools
import math
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp

from fixprop.models.instance import MipInstance


def make_instance(
    c: Sequence[float],
    A,
    row_lower: Sequence[float],
    row_upper: Sequence[float],
    col_lower: Sequence[float],
    col_upper: Sequence[float],
    is_integer=None,
    name: str = "test",
    **kwargs,
) -> MipInstance:
    n = len(c)
    if is_integer is None:
        is_integer = np.zeros(n, dtype=bool)
    A = np.asarray(A, dtype=float).reshape(len(row_lower), n)
    return MipInstance(
        c=c,
        A=A,
        row_lower=row_lower,
        row_upper=row_upper,
        col_lower=col_lower,
        col_upper=col_upper,
        is_integer=is_integer,
        name=name,
        **kwargs,
    )


def binary_instance(c, A, row_lower, row_upper, name: str = "binary") -> MipInstance:
    n = len(c)
    return make_instance(c, A, row_lower, row_upper, np.zeros(n), np.ones(n), np.ones(n, dtype=bool), name)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def random_binary_instance(rng: np.random.Generator, n: int, m: int) -> MipInstance:
    """Random rows over binaries with mixed signs, some set-packing rows"""
    A = np.zeros((m, n))
    row_lower = np.full(m, -np.inf)
    row_upper = np.full(m, np.inf)
    for i in range(m):
        support = rng.choice(n, size=rng.integers(2, min(n, 5) + 1), replace=False)
        if rng.random() < 0.3:
            A[i, support] = 1.0
            row_upper[i] = 1.0
            continue
        A[i, support] = rng.integers(-3, 4, size=len(support))
        A[i, support[A[i, support] == 0]] = 1.0
        point = rng.integers(0, 2, size=n)
        activity = A[i] @ point
        kind = rng.integers(3)
        if kind == 0:
            row_upper[i] = activity + rng.integers(0, 2)
        elif kind == 1:
            row_lower[i] = activity - rng.integers(0, 2)
        else:
            row_lower[i] = activity - rng.integers(0, 2)
            row_upper[i] = activity + rng.integers(0, 2)
    c = rng.integers(-5, 6, size=n).astype(float)
    return binary_instance(c, A, row_lower, row_upper, name=f"rand_{n}x{m}")


def random_integer_instance(rng: np.random.Generator, n: int, m: int, width: int) -> MipInstance:
    """Random rows over general integers with domains [l, l + k], 1 <= k <= width, l possibly negative"""
    lower = rng.integers(-2, 2, size=n)
    upper = lower + rng.integers(1, width + 1, size=n)
    A = np.zeros((m, n))
    row_lower = np.full(m, -np.inf)
    row_upper = np.full(m, np.inf)
    for i in range(m):
        support = rng.choice(n, size=rng.integers(2, min(n, 4) + 1), replace=False)
        A[i, support] = rng.integers(-3, 4, size=len(support))
        A[i, support[A[i, support] == 0]] = 1.0
        activity = A[i] @ rng.integers(lower, upper + 1)
        kind = rng.integers(3)
        if kind == 0:
            row_upper[i] = activity + rng.integers(0, 2)
        elif kind == 1:
            row_lower[i] = activity - rng.integers(0, 2)
        else:
            row_lower[i] = row_upper[i] = activity
    c = rng.integers(-5, 6, size=n).astype(float)
    return make_instance(
        c, A, row_lower, row_upper, lower.astype(float), upper.astype(float), np.ones(n, dtype=bool), name=f"int_{n}x{m}"
    )


def random_bounded_lp(rng: np.random.Generator, n: int, m: int) -> MipInstance:
    """Feasible LP with finite variable bounds and mixed row types"""
    A = rng.normal(size=(m, n))
    A[rng.random((m, n)) < 0.3] = 0.0
    col_lower = -rng.uniform(0.0, 5.0, size=n)
    col_upper = rng.uniform(0.5, 5.0, size=n)
    x0 = rng.uniform(col_lower, col_upper)
    activity = A @ x0
    row_lower = np.full(m, -np.inf)
    row_upper = np.full(m, np.inf)
    for i in range(m):
        kind = rng.integers(4)
        if kind == 0:
            row_upper[i] = activity[i] + rng.uniform(0.0, 1.0)
        elif kind == 1:
            row_lower[i] = activity[i] - rng.uniform(0.0, 1.0)
        elif kind == 2:
            row_lower[i] = activity[i] - rng.uniform(0.0, 1.0)
            row_upper[i] = activity[i] + rng.uniform(0.0, 1.0)
        else:
            row_lower[i] = row_upper[i] = activity[i]
    c = rng.normal(size=n)
    return make_instance(c, A, row_lower, row_upper, col_lower, col_upper, name=f"lp_{n}x{m}")


def knapsack_instance(rng: np.random.Generator, n: int, name: str = "knapsack") -> MipInstance:
    """max p x  s.t.  w x <= W over binaries, stated as min -p x"""
    weights = rng.integers(5, 40, size=n).astype(float)
    profits = (weights + rng.integers(-4, 12, size=n)).clip(min=1).astype(float)
    capacity = float(np.floor(weights.sum() / 2))
    return binary_instance(-profits, weights.reshape(1, n), [-np.inf], [capacity], name=name)


def covering_instance(rng: np.random.Generator, n: int, m: int, name: str = "cover") -> MipInstance:
    """min c x  s.t.  every row covered at least once, over binaries"""
    A = (rng.random((m, n)) < 0.25).astype(float)
    for i in range(m):
        if not A[i].any():
            A[i, rng.integers(n)] = 1.0
    c = rng.integers(1, 20, size=n).astype(float)
    return binary_instance(c, A, np.ones(m), np.full(m, np.inf), name=name)


# ---------------------------------------------------------------------------
# Brute force over 0/1 points
# ---------------------------------------------------------------------------


def integer_points(lower: Sequence[float], upper: Sequence[float]) -> Iterator[np.ndarray]:
    ranges = [range(int(lo), int(hi) + 1) for lo, hi in zip(lower, upper)]
    for point in itertools.product(*ranges):
        yield np.array(point, dtype=float)


def feasible_points(instance: MipInstance, lower=None, upper=None, tol: float = 1e-9) -> List[np.ndarray]:
    """All integer points of a pure integer instance within [lower, upper]"""
    lower = instance.col_lower if lower is None else lower
    upper = instance.col_upper if upper is None else upper
    points = []
    for x in integer_points(lower, upper):
        activity = instance.A @ x
        if np.all(activity >= instance.row_lower - tol) and np.all(activity <= instance.row_upper + tol):
            points.append(x)
    return points


def brute_force_optimum(instance: MipInstance) -> Optional[float]:
    """Optimal internal objective of a pure integer instance, None if infeasible"""
    best = None
    for x in feasible_points(instance):
        value = instance.objective_value(x)
        if best is None or value < best:
            best = value
    return best


# ---------------------------------------------------------------------------
# LP oracles
# ---------------------------------------------------------------------------


def _inequality_form(instance: MipInstance):
    """G x <= h covering rows and variable bounds (finite sides only)"""
    A = instance.A.toarray()
    n = instance.num_cols
    blocks, rhs = [], []
    for i in range(instance.num_rows):
        if math.isfinite(instance.row_upper[i]):
            blocks.append(A[i])
            rhs.append(instance.row_upper[i])
        if math.isfinite(instance.row_lower[i]):
            blocks.append(-A[i])
            rhs.append(-instance.row_lower[i])
    eye = np.eye(n)
    for j in range(n):
        if math.isfinite(instance.col_upper[j]):
            blocks.append(eye[j])
            rhs.append(instance.col_upper[j])
        if math.isfinite(instance.col_lower[j]):
            blocks.append(-eye[j])
            rhs.append(-instance.col_lower[j])
    return np.array(blocks), np.array(rhs)


def optimal_vertex(instance: MipInstance, tol: float = 1e-9) -> Optional[Tuple[np.ndarray, float]]:
    """
    Best vertex and its objective, by enumerating every basis of the inequality form

    Only for tiny bounded LPs (inequality rows choose n must stay small).
    """
    G, h = _inequality_form(instance)
    n = instance.num_cols
    best = None
    for subset in itertools.combinations(range(len(h)), n):
        sub = G[list(subset)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x = np.linalg.solve(sub, h[list(subset)])
        if np.all(G @ x <= h + tol * (1.0 + np.abs(h))):
            value = instance.objective_value(x)
            if best is None or value < best[1]:
                best = (x, value)
    return best


def vertex_optimum(instance: MipInstance, tol: float = 1e-9) -> Optional[float]:
    """LP optimum by basis enumeration, None if no vertex is feasible"""
    best = optimal_vertex(instance, tol)
    return None if best is None else best[1]


def highs_optimum(instance: MipInstance) -> Optional[float]:
    """LP relaxation optimum from HiGHS, None if not solved to optimality"""
    G, h = _inequality_form(instance)
    result = linprog(instance.c, A_ub=G, b_ub=h, bounds=(None, None), method="highs")
    if result.status != 0:
        return None
    return float(result.fun) + instance.objective_offset


def milp_optimum(instance: MipInstance) -> Optional[float]:
    """MIP optimum from HiGHS branch-and-bound, None if not solved to optimality"""
    constraints = LinearConstraint(instance.A, instance.row_lower, instance.row_upper)
    result = milp(
        instance.c,
        constraints=constraints,
        integrality=instance.is_integer.astype(int),
        bounds=Bounds(instance.col_lower, instance.col_upper),
    )
    if result.status != 0:
        return None
    return float(result.fun) + instance.objective_offset
