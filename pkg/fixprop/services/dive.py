"""
Depth-first fix-and-propagate search

The remaining fixing order of a node is stored as a position into the base
order plus a short front of variables that were restricted but not fixed and
have to be branched on again first.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from ..config import HeuristicConfig
from ..models.instance import MipInstance
from ..models.lp_solution import LpSolution
from .branching import BoundChange, branch, fixing_value
from .ordering import FixingOrder
from .propagation import CliqueTable, Domain, propagate

logger = logging.getLogger(__name__)


class SearchStatus(str, Enum):
    FOUND = "found"
    EXHAUSTED = "exhausted"
    NODE_LIMIT = "node_limit"
    BACKTRACK_LIMIT = "backtrack_limit"
    TIME_LIMIT = "time_limit"


@dataclass(frozen=True)
class SearchNode:
    change: BoundChange
    depth: int
    trail_length: int
    pos: int
    front: Tuple[int, ...] = ()


@dataclass(frozen=True, eq=False)
class SearchOutcome:
    """
    Result of one dive.

    ``assignment`` has one entry per column: the fixed value for integer
    variables and NaN for continuous ones. It is None unless a leaf was reached.
    """

    status: SearchStatus
    assignment: Optional[np.ndarray] = None
    nodes: int = 0
    backtracks: int = 0
    depth: int = 0
    trace: Tuple[Tuple[int, float, float], ...] = field(default=())
    domain: Optional[Domain] = None

    @property
    def found(self) -> bool:
        return self.status is SearchStatus.FOUND


class _Dive:
    def __init__(
        self,
        instance: MipInstance,
        cliques: CliqueTable,
        order: FixingOrder,
        lp: LpSolution,
        config: HeuristicConfig,
        domain: Domain,
        time_limit: float,
    ):
        self.instance = instance
        self.cliques = cliques
        self.order = order.indices
        self.lp = lp
        self.domain = domain
        self.rng = np.random.default_rng(config.seed)
        self.node_limit = config.resolved_node_limit(instance.num_integers)
        self.backtrack_limit = config.backtrack_limit
        self.deadline = time.perf_counter() + time_limit if math.isfinite(time_limit) else math.inf

        self.stack: List[SearchNode] = []
        self.nodes = 0
        self.backtracks = 0
        self.depth = 0
        self.trace: List[Tuple[int, float, float]] = []

    def _next_variable(self, pos: int, front: Tuple[int, ...]) -> Tuple[Optional[int], int, Tuple[int, ...]]:
        while front:
            j, front = front[0], front[1:]
            if not self.domain.is_fixed(j):
                return j, pos, front
        while pos < len(self.order):
            j = self.order[pos]
            pos += 1
            if not self.domain.is_fixed(j):
                return j, pos, front
        return None, pos, front

    def _expand(self, pos: int, front: Tuple[int, ...], depth: int) -> bool:
        """Push the children of the next unfixed variable; False when none is left"""
        j, pos, front = self._next_variable(pos, front)
        if j is None:
            return False
        lower, upper = self.domain.bounds(j)
        value = fixing_value(j, self.lp, lower, upper, self.rng)
        trail_length = self.domain.trail_length
        for change in branch(j, value, lower, upper, float(self.instance.c[j])):
            child_front = front if change.is_fixing else (j,) + front
            self.stack.append(SearchNode(change, depth + 1, trail_length, pos, child_front))
        return True

    def _outcome(self, status: SearchStatus) -> SearchOutcome:
        assignment = None
        if status is SearchStatus.FOUND:
            assignment = np.where(self.instance.is_integer, self.domain.lower, np.nan)
        return SearchOutcome(
            status=status,
            assignment=assignment,
            nodes=self.nodes,
            backtracks=self.backtracks,
            depth=self.depth,
            trace=tuple(self.trace),
            domain=self.domain,
        )

    def run(self) -> SearchOutcome:
        if propagate(self.instance, self.cliques, self.domain).infeasible:
            logger.debug("root propagation proved infeasibility")
            return self._outcome(SearchStatus.EXHAUSTED)
        if not self._expand(0, (), 0):
            return self._outcome(SearchStatus.FOUND)

        while self.stack:
            if time.perf_counter() > self.deadline:
                return self._outcome(SearchStatus.TIME_LIMIT)
            if self.nodes >= self.node_limit:
                return self._outcome(SearchStatus.NODE_LIMIT)

            node = self.stack.pop()
            self.nodes += 1
            self.domain.undo(node.trail_length)
            change = node.change
            self.trace.append((change.var, change.lower, change.upper))

            if (
                not self.domain.apply(change.var, change.lower, change.upper)
                or propagate(self.instance, self.cliques, self.domain).infeasible
            ):
                self.backtracks += 1
                if self.backtracks > self.backtrack_limit:
                    return self._outcome(SearchStatus.BACKTRACK_LIMIT)
                continue

            self.depth = node.depth
            if not self._expand(node.pos, node.front, node.depth):
                return self._outcome(SearchStatus.FOUND)

        return self._outcome(SearchStatus.EXHAUSTED)


def dfs_search(
    instance: MipInstance,
    cliques: CliqueTable,
    order: FixingOrder,
    lp: LpSolution,
    config: Optional[HeuristicConfig] = None,
    domain: Optional[Domain] = None,
    time_limit: Optional[float] = None,
) -> SearchOutcome:
    """
    Fix integer variables in ``order`` with propagation after every fixing

    Args:
        instance: MIP being searched
        cliques: clique table of ``instance``
        order: fixing order over the integer variables
        lp: LP solution whose values guide the fixing values
        config: limits and seed, defaults to HeuristicConfig()
        domain: starting domain, defaults to the instance bounds
        time_limit: seconds for this dive, defaults to config.time_limit

    Returns:
        SearchOutcome; limits and an exhausted tree are outcomes, not errors
    """
    config = config or HeuristicConfig()
    if domain is None:
        domain = Domain.from_instance(instance)
    if time_limit is None:
        time_limit = config.time_limit
    outcome = _Dive(instance, cliques, order, lp, config, domain, time_limit).run()
    logger.debug(
        "dive %s: nodes=%d backtracks=%d depth=%d",
        outcome.status.value, outcome.nodes, outcome.backtracks, outcome.depth,
    )
    return outcome
