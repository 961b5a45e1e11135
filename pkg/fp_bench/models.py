"""Data models for batch runs and aggregated results"""

import itertools
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator

from fixprop.config import HeuristicConfig

logger = logging.getLogger(__name__)


class AggregateRow(BaseModel):
    """One line of the aggregate table"""

    label: str
    runs: int = Field(ge=0)
    found: int = Field(ge=0)
    sgm_gap: Optional[float] = None
    sgm_time: Optional[float] = None

    def csv_fields(self) -> List[str]:
        def fmt(value: Optional[float]) -> str:
            return "" if value is None else f"{value:.6f}"

        return [self.label, str(self.runs), str(self.found), fmt(self.sgm_gap), fmt(self.sgm_time)]


def _as_list(value):
    if value is None:
        return value
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


class BatchMatrix(BaseModel):
    """
    Config matrix for a batch run

    Every list-valued key is crossed with every other; scalars apply to all
    runs. ``permutations`` is either a count (seeds 0..k-1, 0 is the identity)
    or an explicit list of permutation seeds.
    """

    model_config = ConfigDict(extra="forbid")

    strategy: List[str] = ["frac"]
    tiebreak: List[str] = ["none"]
    init_tol: List[float] = [1e-4]
    final_tol: List[float] = [1e-8]
    initial_lp_method: List[str] = ["pdhg"]
    seeds: List[int] = [0]
    permutations: List[int] = [0]
    time_limit: float = math.inf
    backtrack_limit: float = 1000
    references: Dict[str, float] = {}

    @field_validator("strategy", "tiebreak", "init_tol", "final_tol", "initial_lp_method", "seeds", mode="before")
    @classmethod
    def _listify(cls, value):
        return _as_list(value)

    @field_validator("permutations", mode="before")
    @classmethod
    def _permutation_seeds(cls, value):
        if isinstance(value, int) and not isinstance(value, bool):
            if value < 1:
                raise ValueError("permutations must be at least 1")
            return list(range(value))
        return _as_list(value)

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> "BatchMatrix":
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
        if not isinstance(data, dict):
            raise ValueError(f"{path}: config matrix must be a mapping")
        return cls(**data)

    def configs(self) -> List[HeuristicConfig]:
        """All valid heuristic configs; strategy/tiebreak pairs naming the same key are skipped"""
        configs = []
        for strategy, tiebreak, init_tol, final_tol, method, seed in itertools.product(
            self.strategy, self.tiebreak, self.init_tol, self.final_tol, self.initial_lp_method, self.seeds
        ):
            if strategy == tiebreak:
                logger.debug("skipping %s/%s: strategy equals tiebreaker", strategy, tiebreak)
                continue
            configs.append(
                HeuristicConfig(
                    strategy=strategy,
                    tiebreaker=tiebreak,
                    initial_tolerance=init_tol,
                    final_tolerance=final_tol,
                    initial_lp_method=method,
                    seed=seed,
                    time_limit=self.time_limit,
                    backtrack_limit=self.backtrack_limit,
                )
            )
        return configs
