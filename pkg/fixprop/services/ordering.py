"""
Variable orders for the fix-and-propagate dive

A strategy assigns each integer variable a sort key; variables whose keys lie
within TIE_TOL of each other form a tie group, ordered by the tiebreaker's key
and finally by index.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Union

import numpy as np

from ..config import Tiebreaker, VariableStrategy
from ..errors import StrategyError
from ..models.instance import MipInstance
from ..models.lp_solution import LpSolution

logger = logging.getLogger(__name__)

TIE_TOL = 1e-6


@dataclass(frozen=True)
class FixingOrder:
    indices: tuple
    strategy: VariableStrategy
    tiebreaker: Tiebreaker = Tiebreaker.NONE

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __getitem__(self, pos: int) -> int:
        return self.indices[pos]


def fractionality(values: np.ndarray) -> np.ndarray:
    """Distance to the nearest integer, in [0, 0.5]"""
    values = np.asarray(values, dtype=float)
    return np.minimum(values - np.floor(values), np.ceil(values) - values)


def _by_descending(keys: np.ndarray, indices: Sequence[int]) -> List[int]:
    return sorted(indices, key=lambda j: (-keys[j], j))


def dual_order(instance: MipInstance, lp: LpSolution, candidates: Sequence[int]) -> List[int]:
    """
    Rows by descending |y|; each row contributes its unlisted candidates by
    descending |r|. Candidates in no scanned row follow, again by descending |r|.
    """
    abs_y = np.abs(lp.y)
    abs_r = np.abs(lp.reduced_costs)
    is_candidate = np.zeros(instance.num_cols, dtype=bool)
    is_candidate[list(candidates)] = True
    listed = np.zeros(instance.num_cols, dtype=bool)

    A = instance.A
    order: List[int] = []
    rows = np.lexsort((np.arange(instance.num_rows), -abs_y))
    for i in rows:
        cols = A.indices[A.indptr[i]:A.indptr[i + 1]]
        fresh = [int(j) for j in cols if is_candidate[j] and not listed[j]]
        if not fresh:
            continue
        listed[fresh] = True
        order.extend(_by_descending(abs_r, fresh))

    leftovers = [int(j) for j in candidates if not listed[j]]
    order.extend(_by_descending(abs_r, leftovers))
    return order


def _rank(order: Sequence[int], n: int) -> np.ndarray:
    rank = np.full(n, np.inf)
    rank[list(order)] = np.arange(len(order), dtype=float)
    return rank


def _keys(
    kind: str,
    instance: MipInstance,
    lp: Optional[LpSolution],
    candidates: Sequence[int],
    seed: int,
    frac_descending: bool,
) -> np.ndarray:
    """Ascending sort keys over all columns for a strategy or tiebreaker value"""
    n = instance.num_cols
    if kind == "frac":
        frac = fractionality(lp.x)
        return -frac if frac_descending else frac
    if kind == "redcost":
        return -np.abs(lp.reduced_costs)
    if kind == "dual":
        return _rank(dual_order(instance, lp, candidates), n)
    if kind == "type":
        return np.where(instance.is_binary, 0.0, 1.0)
    if kind == "random":
        shuffled = np.random.default_rng(seed).permutation(np.asarray(candidates, dtype=int))
        return _rank(shuffled, n)
    if kind == "none":
        return np.zeros(n)
    raise StrategyError(f"unknown ordering key {kind!r}")


def order_variables(
    instance: MipInstance,
    lp: Optional[LpSolution],
    strategy: Union[VariableStrategy, str] = VariableStrategy.FRAC,
    tiebreaker: Union[Tiebreaker, str] = Tiebreaker.NONE,
    seed: int = 0,
    frac_descending: bool = False,
) -> FixingOrder:
    """
    Order the integer variables of ``instance`` for fixing

    Raises:
        StrategyError: an LP-based strategy or tiebreaker without an LP
            solution, or strategy and tiebreaker naming the same key
    """
    try:
        strategy = VariableStrategy(strategy)
        tiebreaker = Tiebreaker(tiebreaker)
    except ValueError as exc:
        raise StrategyError(str(exc)) from exc
    if strategy.value == tiebreaker.value:
        raise StrategyError(f"strategy and tiebreaker are both {strategy.value!r}")
    if lp is None and (strategy.needs_lp or tiebreaker.needs_lp):
        raise StrategyError(
            f"strategy {strategy.value!r} with tiebreaker {tiebreaker.value!r} needs an LP solution"
        )

    candidates = [int(j) for j in instance.integer_indices]
    primary = _keys(strategy.value, instance, lp, candidates, seed, frac_descending)
    secondary = _keys(tiebreaker.value, instance, lp, candidates, seed, frac_descending)

    ranked = sorted(candidates, key=lambda j: (primary[j], j))
    indices: List[int] = []
    group: List[int] = []
    for j in ranked:
        if group and primary[j] - primary[group[0]] > TIE_TOL:
            indices.extend(sorted(group, key=lambda k: (secondary[k], k)))
            group = []
        group.append(j)
    indices.extend(sorted(group, key=lambda k: (secondary[k], k)))

    logger.debug("ordered %d integer variables by %s/%s", len(indices), strategy.value, tiebreaker.value)
    return FixingOrder(indices=tuple(indices), strategy=strategy, tiebreaker=tiebreaker)
