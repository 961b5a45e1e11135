"""
Domain propagation: activity-based bound tightening on linear rows plus
clique and implication propagation over binary variables.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np

from ..errors import DimensionError
from ..models.instance import MipInstance

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-6
INTEGRALITY_SLACK = 1e-6
MIN_IMPROVEMENT = 1e-9
CLIQUE_TOL = 1e-9


class Literal(NamedTuple):
    """x_var when positive, (1 - x_var) otherwise"""

    var: int
    positive: bool


@dataclass(frozen=True, eq=False)
class CliqueTable:
    """
    Sets of binary literals of which at most one can be 1.

    Two-literal cliques live in ``implications`` (literal true -> literals
    forced false); larger ones in ``cliques`` indexed by ``literal_cliques``.
    """

    cliques: Tuple[Tuple[Literal, ...], ...] = ()
    implications: Dict[Literal, Tuple[Literal, ...]] = field(default_factory=dict)
    literal_cliques: Dict[Literal, Tuple[int, ...]] = field(default_factory=dict)
    num_pairs: int = 0

    def __len__(self) -> int:
        return len(self.cliques) + self.num_pairs

    def all_cliques(self) -> List[Tuple[Literal, ...]]:
        pairs = {
            tuple(sorted((lit, other)))
            for lit, others in self.implications.items()
            for other in others
        }
        return list(self.cliques) + sorted(pairs)

    def forced_false(self, literal: Literal) -> List[Literal]:
        """Literals that must be 0 once ``literal`` is 1"""
        forced = list(self.implications.get(literal, ()))
        for idx in self.literal_cliques.get(literal, ()):
            forced.extend(lit for lit in self.cliques[idx] if lit != literal)
        return forced


def _row_clique(
    cols: np.ndarray, coefs: np.ndarray, rhs: float, is_binary: np.ndarray
) -> Optional[Tuple[Literal, ...]]:
    """Clique of one  sum coefs * x <= rhs  row, if any"""
    if len(cols) < 2 or not is_binary[cols].all():
        return None

    weights = np.abs(coefs)
    # a x with a < 0 becomes |a| (1 - x) after moving |a| to the right-hand side
    rhs = rhs + float(weights[coefs < 0].sum())
    smallest = np.partition(weights, 1)[:2]
    if smallest.sum() <= rhs + CLIQUE_TOL * (1.0 + abs(rhs)):
        return None
    return tuple(sorted(Literal(int(j), bool(a > 0)) for j, a in zip(cols, coefs)))


def build_clique_table(instance: MipInstance) -> CliqueTable:
    """Extract set-packing cliques from rows over binaries"""
    is_binary = instance.is_binary
    A = instance.A
    found = set()

    for i in range(instance.num_rows):
        start, end = A.indptr[i], A.indptr[i + 1]
        cols = A.indices[start:end]
        coefs = A.data[start:end]
        if len(cols) < 2:
            continue
        if math.isfinite(instance.row_upper[i]):
            clique = _row_clique(cols, coefs, float(instance.row_upper[i]), is_binary)
            if clique:
                found.add(clique)
        if math.isfinite(instance.row_lower[i]):
            clique = _row_clique(cols, -coefs, -float(instance.row_lower[i]), is_binary)
            if clique:
                found.add(clique)

    cliques = []
    implications: Dict[Literal, List[Literal]] = {}
    num_pairs = 0
    for clique in sorted(found):
        if len(clique) == 2:
            first, second = clique
            implications.setdefault(first, []).append(second)
            implications.setdefault(second, []).append(first)
            num_pairs += 1
        else:
            cliques.append(clique)

    literal_cliques: Dict[Literal, List[int]] = {}
    for idx, clique in enumerate(cliques):
        for lit in clique:
            literal_cliques.setdefault(lit, []).append(idx)

    table = CliqueTable(
        cliques=tuple(cliques),
        implications={lit: tuple(others) for lit, others in implications.items()},
        literal_cliques={lit: tuple(ids) for lit, ids in literal_cliques.items()},
        num_pairs=num_pairs,
    )
    logger.debug("clique table: %d cliques, %d implications", len(cliques), num_pairs)
    return table


class _Conflict(Exception):
    pass


class Domain:
    """
    Mutable variable bounds with an undo trail.

    ``lower`` and ``upper`` are read by callers; changes go through the
    tighten/apply methods so that the trail and dirty queue stay in sync.
    """

    def __init__(self, lower: np.ndarray, upper: np.ndarray, is_integer: np.ndarray):
        self.lower = np.array(lower, dtype=float)
        self.upper = np.array(upper, dtype=float)
        self.is_integer = np.array(is_integer, dtype=bool)
        if not (self.lower.shape == self.upper.shape == self.is_integer.shape):
            raise DimensionError("lower, upper and is_integer must have equal length")
        self._trail: List[Tuple[int, float, float]] = []
        self._dirty: List[int] = []
        self._is_dirty = np.zeros(len(self.lower), dtype=bool)

    @classmethod
    def from_instance(cls, instance: MipInstance) -> "Domain":
        """Root domain with every variable marked dirty"""
        domain = cls(instance.col_lower, instance.col_upper, instance.is_integer)
        domain.mark_dirty(range(instance.num_cols))
        return domain

    def __len__(self) -> int:
        return len(self.lower)

    @property
    def trail_length(self) -> int:
        return len(self._trail)

    def is_fixed(self, j: int) -> bool:
        return self.lower[j] == self.upper[j]

    def bounds(self, j: int) -> Tuple[float, float]:
        return float(self.lower[j]), float(self.upper[j])

    def mark_dirty(self, indices: Iterable[int]) -> None:
        for j in indices:
            if not self._is_dirty[j]:
                self._is_dirty[j] = True
                self._dirty.append(int(j))

    @property
    def has_dirty(self) -> bool:
        return bool(self._dirty)

    def take_dirty(self) -> List[int]:
        dirty = self._dirty
        self._dirty = []
        self._is_dirty[dirty] = False
        return dirty

    def _record(self, j: int) -> None:
        self._trail.append((j, float(self.lower[j]), float(self.upper[j])))
        self.mark_dirty((j,))

    def tighten_lower(self, j: int, value: float) -> bool:
        """Raise the lower bound if it improves; raises _Conflict on an empty domain"""
        if self.is_integer[j]:
            value = float(np.ceil(value - INTEGRALITY_SLACK))
        old = float(self.lower[j])
        if value <= old or (math.isfinite(old) and value <= old + MIN_IMPROVEMENT * (1.0 + abs(old))):
            return False
        upper = float(self.upper[j])
        if value > upper:
            if value > upper + FEASIBILITY_TOL * max(1.0, abs(upper)):
                raise _Conflict
            value = upper
            if value == old:
                return False
        self._record(j)
        self.lower[j] = value
        return True

    def tighten_upper(self, j: int, value: float) -> bool:
        """Lower the upper bound if it improves; raises _Conflict on an empty domain"""
        if self.is_integer[j]:
            value = float(np.floor(value + INTEGRALITY_SLACK))
        old = float(self.upper[j])
        if value >= old or (math.isfinite(old) and value >= old - MIN_IMPROVEMENT * (1.0 + abs(old))):
            return False
        lower = float(self.lower[j])
        if value < lower:
            if value < lower - FEASIBILITY_TOL * max(1.0, abs(lower)):
                raise _Conflict
            value = lower
            if value == old:
                return False
        self._record(j)
        self.upper[j] = value
        return True

    def apply(self, var: int, lower: float, upper: float) -> bool:
        """
        Intersect the domain of ``var`` with [lower, upper].

        Returns False, leaving the domain untouched, if the intersection is empty.
        """
        new_lower = max(float(self.lower[var]), lower)
        new_upper = min(float(self.upper[var]), upper)
        if new_lower > new_upper:
            return False
        if new_lower != self.lower[var] or new_upper != self.upper[var]:
            self._record(var)
            self.lower[var] = new_lower
            self.upper[var] = new_upper
        return True

    def undo(self, trail_length: int) -> None:
        """Restore the state recorded when the trail had ``trail_length`` entries"""
        while len(self._trail) > trail_length:
            j, lo, hi = self._trail.pop()
            self.lower[j] = lo
            self.upper[j] = hi
        self.take_dirty()

    def contains(self, x: np.ndarray, tol: float = 0.0) -> bool:
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))


@dataclass(frozen=True)
class PropagationResult:
    feasible: bool
    saturated: bool = False
    tightenings: int = 0

    @property
    def infeasible(self) -> bool:
        return not self.feasible


class _RowPropagator:
    """One propagation call; holds the queues and the tightening budget"""

    def __init__(self, instance: MipInstance, cliques: CliqueTable, domain: Domain, round_limit: int):
        self.instance = instance
        self.cliques = cliques
        self.domain = domain
        self.round_limit = round_limit
        self.tightenings = 0
        self.row_queue: deque = deque()
        self.queued = np.zeros(instance.num_rows, dtype=bool)
        self.is_binary = instance.is_binary

    def _tighten(self, j: int, lower: Optional[float] = None, upper: Optional[float] = None) -> None:
        changed = False
        if lower is not None:
            changed |= self.domain.tighten_lower(j, lower)
        if upper is not None:
            changed |= self.domain.tighten_upper(j, upper)
        if changed:
            self.tightenings += 1

    def _schedule(self, j: int) -> None:
        A_csc = self.instance.A_csc
        for i in A_csc.indices[A_csc.indptr[j]:A_csc.indptr[j + 1]]:
            if not self.queued[i]:
                self.queued[i] = True
                self.row_queue.append(int(i))

        if self.is_binary[j] and self.domain.is_fixed(j):
            value = self.domain.lower[j]
            if value not in (0.0, 1.0):
                return
            for lit in self.cliques.forced_false(Literal(j, value == 1.0)):
                if lit.positive:
                    self._tighten(lit.var, upper=0.0)
                else:
                    self._tighten(lit.var, lower=1.0)

    def _process_row(self, i: int) -> None:
        A = self.instance.A
        start, end = A.indptr[i], A.indptr[i + 1]
        if start == end:
            return
        cols = A.indices[start:end]
        coefs = A.data[start:end]
        row_lower = float(self.instance.row_lower[i])
        row_upper = float(self.instance.row_upper[i])

        lo = self.domain.lower[cols]
        hi = self.domain.upper[cols]
        pos = coefs > 0
        with np.errstate(invalid="ignore"):
            min_terms = np.where(pos, coefs * lo, coefs * hi)
            max_terms = np.where(pos, coefs * hi, coefs * lo)
        min_inf = ~np.isfinite(min_terms)
        max_inf = ~np.isfinite(max_terms)
        min_finite = np.where(min_inf, 0.0, min_terms)
        max_finite = np.where(max_inf, 0.0, max_terms)
        n_min_inf = int(min_inf.sum())
        n_max_inf = int(max_inf.sum())
        min_sum = float(min_finite.sum())
        max_sum = float(max_finite.sum())

        min_activity = -math.inf if n_min_inf else min_sum
        max_activity = math.inf if n_max_inf else max_sum
        if min_activity > row_upper + FEASIBILITY_TOL * max(1.0, abs(row_upper)):
            raise _Conflict
        if max_activity < row_lower - FEASIBILITY_TOL * max(1.0, abs(row_lower)):
            raise _Conflict

        use_upper = math.isfinite(row_upper) and n_min_inf <= 1
        use_lower = math.isfinite(row_lower) and n_max_inf <= 1
        if not (use_upper or use_lower):
            return

        # Activity of the other entries; valid when no other entry is infinite
        min_rest = min_sum - min_finite
        max_rest = max_sum - max_finite
        min_rest_ok = (n_min_inf == 0) | min_inf
        max_rest_ok = (n_max_inf == 0) | max_inf

        for k in range(len(cols)):
            j = int(cols[k])
            a = float(coefs[k])
            if use_upper and min_rest_ok[k]:
                bound = (row_upper - min_rest[k]) / a
                if a > 0:
                    self._tighten(j, upper=bound)
                else:
                    self._tighten(j, lower=bound)
            if use_lower and max_rest_ok[k]:
                bound = (row_lower - max_rest[k]) / a
                if a > 0:
                    self._tighten(j, lower=bound)
                else:
                    self._tighten(j, upper=bound)

    def run(self) -> bool:
        """Propagate to a fixpoint; returns True if the round limit stopped it"""
        while True:
            for j in self.domain.take_dirty():
                self._schedule(j)
            if not self.row_queue:
                if self.domain.has_dirty:
                    continue
                return False
            if self.tightenings >= self.round_limit:
                return True
            i = self.row_queue.popleft()
            self.queued[i] = False
            self._process_row(i)


def propagate(
    instance: MipInstance,
    cliques: CliqueTable,
    domain: Domain,
    round_limit: Optional[int] = None,
) -> PropagationResult:
    """
    Tighten ``domain`` in place until no dirty variable is left.

    On infeasibility the domain is restored to its state at entry and the
    result is marked infeasible.
    """
    if len(domain) != instance.num_cols:
        raise DimensionError(f"domain has {len(domain)} variables, instance has {instance.num_cols}")
    if round_limit is None:
        round_limit = max(100 * instance.num_cols, 1)

    entry = domain.trail_length
    propagator = _RowPropagator(instance, cliques, domain, round_limit)
    try:
        saturated = propagator.run()
    except _Conflict:
        domain.undo(entry)
        return PropagationResult(feasible=False, tightenings=propagator.tightenings)

    if saturated:
        logger.debug("propagation stopped after %d tightenings", propagator.tightenings)
    return PropagationResult(feasible=True, saturated=saturated, tightenings=propagator.tightenings)
