"""Fixing values and branching bound changes for one integer variable"""

import math
from typing import List, NamedTuple

import numpy as np

from ..errors import BranchingError
from ..models.lp_solution import LpSolution


class BoundChange(NamedTuple):
    """Child domain [lower, upper] for variable ``var``"""

    var: int
    lower: float
    upper: float

    @property
    def is_fixing(self) -> bool:
        return self.lower == self.upper


def fixing_value(
    var: int, lp: LpSolution, lower: float, upper: float, rng: np.random.Generator
) -> float:
    """
    Randomized rounding of the LP value of ``var`` inside [lower, upper]

    With v the LP value clamped into the domain and d_v = v - floor(v), the
    result is floor(v) with probability 1 - d_v and ceil(v) otherwise.
    """
    if not lower <= upper:
        raise BranchingError(f"variable {var} has an empty domain [{lower}, {upper}]")
    x_lp = float(lp.x[var])
    if math.isnan(x_lp):
        raise BranchingError(f"LP value of variable {var} is NaN")

    v = min(max(x_lp, lower), upper)
    if not math.isfinite(v):
        raise BranchingError(f"variable {var} has no finite value to fix to in [{lower}, {upper}]")
    floor_v = math.floor(v)
    frac = v - floor_v
    d = rng.random()
    value = float(floor_v) if d > frac else float(math.ceil(v))
    return min(max(value, lower), upper)


def branch(var: int, value: float, lower: float, upper: float, objective: float) -> List[BoundChange]:
    """
    Child bound changes in increasing priority; the last one is explored first.

    Interior value: both restrictions then the fixing, with the restriction in
    the objective-improving direction second. Value at a bound: the opposite
    endpoint then the fixing. An infinite opposite endpoint turns into the
    restriction towards it.
    """
    if not lower <= value <= upper:
        raise BranchingError(f"fixing value {value} outside domain [{lower}, {upper}] of variable {var}")
    if value != math.floor(value):
        raise BranchingError(f"fixing value {value} of variable {var} is not integral")

    fix = BoundChange(var, value, value)
    if lower == upper:
        return [fix]

    up = BoundChange(var, value + 1, upper)
    down = BoundChange(var, lower, value - 1)
    if lower < value < upper:
        return [up, down, fix] if objective > 0 else [down, up, fix]
    if value == lower:
        other = BoundChange(var, upper, upper) if math.isfinite(upper) else up
    else:
        other = BoundChange(var, lower, lower) if math.isfinite(lower) else down
    return [other, fix]
