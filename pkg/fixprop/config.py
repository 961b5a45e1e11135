"""
Configuration for the fix-and-propagate heuristic and the first-order LP solver
"""

import math
import os
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional


def _load_dotenv(env_path: Optional[Path] = None) -> None:
    """
    Load environment variables from a .env file located at the repo root.
    Existing variables are preserved to avoid overwriting manual overrides.
    """
    if env_path is None:
        env_path = Path(__file__).resolve().parents[1] / ".env"

    if not env_path.is_file():
        return

    with env_path.open("r", encoding="utf-8") as fh:
        for raw_line in fh:
            line = raw_line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue

            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip().strip('\'"')

            if not key or key in os.environ:
                continue

            os.environ[key] = value


_load_dotenv()


class VariableStrategy(str, Enum):
    """Order in which integer variables are fixed"""

    FRAC = "frac"
    REDCOST = "redcost"
    DUAL = "dual"
    TYPE = "type"
    RANDOM = "random"

    @property
    def needs_lp(self) -> bool:
        return self in (VariableStrategy.FRAC, VariableStrategy.REDCOST, VariableStrategy.DUAL)


class Tiebreaker(str, Enum):
    """Secondary key for variables the strategy ranks equally"""

    NONE = "none"
    FRAC = "frac"
    REDCOST = "redcost"
    DUAL = "dual"

    @property
    def needs_lp(self) -> bool:
        return self is not Tiebreaker.NONE


class InitialLpMethod(str, Enum):
    PDHG = "pdhg"
    HIGHS = "highs"


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError:
        return default


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        return default


@dataclass(frozen=True)
class FolpConfig:
    """First-order LP solver settings"""

    # Termination
    tolerance: float = 1e-4
    max_iterations: int = 100_000
    time_limit: float = math.inf

    # Restarts
    restart_trigger: float = 0.36
    check_frequency: int = 64

    # Step sizes
    step_size_factor: float = 0.9
    power_iterations: int = 30
    primal_weight: float = 1.0
    adaptive_primal_weight: bool = False
    primal_weight_smoothing: float = 0.5

    # Rescaling
    ruiz_iterations: int = 10
    pock_chambolle_alpha: float = 1.0

    divergence_threshold: float = 1e12
    verbose: bool = False

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations <= 0:
            raise ValueError(f"max_iterations must be positive, got {self.max_iterations}")
        if not self.time_limit > 0:
            raise ValueError(f"time_limit must be positive, got {self.time_limit}")
        if not 0 < self.restart_trigger < 1:
            raise ValueError(f"restart_trigger must lie in (0, 1), got {self.restart_trigger}")
        if not 0 < self.step_size_factor < 1:
            raise ValueError(f"step_size_factor must lie in (0, 1), got {self.step_size_factor}")
        if self.check_frequency <= 0 or self.power_iterations <= 0:
            raise ValueError("check_frequency and power_iterations must be positive")
        if self.ruiz_iterations < 0 or self.pock_chambolle_alpha < 0:
            raise ValueError("rescaling parameters must be nonnegative")
        if not self.primal_weight > 0:
            raise ValueError(f"primal_weight must be positive, got {self.primal_weight}")

    @classmethod
    def initial(cls, tolerance: float = 1e-4, **overrides) -> "FolpConfig":
        """Low-accuracy preset used for the initial LP relaxation"""
        return cls(tolerance=tolerance, **overrides)

    @classmethod
    def final(cls, tolerance: float = 1e-8, **overrides) -> "FolpConfig":
        """High-accuracy preset used once all integers are fixed"""
        overrides.setdefault("max_iterations", 200_000)
        return cls(tolerance=tolerance, **overrides)


@dataclass(frozen=True)
class HeuristicConfig:
    """Fix-and-propagate heuristic settings"""

    strategy: VariableStrategy = VariableStrategy.FRAC
    tiebreaker: Tiebreaker = Tiebreaker.NONE

    # LP accuracies
    initial_tolerance: float = 1e-4
    final_tolerance: float = 1e-8
    initial_lp_method: InitialLpMethod = InitialLpMethod.PDHG
    initial_max_iterations: int = 100_000
    final_max_iterations: int = 200_000
    # HiGHS decides feasibility of the fixed LP before PDHG runs on it
    final_lp_feasibility_check: bool = True

    seed: int = 0

    # Search limits
    backtrack_limit: float = 1000
    node_limit: Optional[int] = None  # None: 100 * |I|
    time_limit: float = math.inf

    frac_descending: bool = False
    feasibility_tolerance: float = 1e-6

    def __post_init__(self):
        # Accept plain strings from the CLI and YAML matrices
        object.__setattr__(self, "strategy", VariableStrategy(self.strategy))
        object.__setattr__(self, "tiebreaker", Tiebreaker(self.tiebreaker))
        object.__setattr__(self, "initial_lp_method", InitialLpMethod(self.initial_lp_method))

        if self.strategy.value == self.tiebreaker.value:
            raise ValueError(f"strategy and tiebreaker must differ, both are {self.strategy.value!r}")
        if not self.initial_tolerance > 0 or not self.final_tolerance > 0:
            raise ValueError("LP tolerances must be positive")
        if not self.backtrack_limit > 0:
            raise ValueError(f"backtrack_limit must be positive, got {self.backtrack_limit}")
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError(f"node_limit must be positive, got {self.node_limit}")
        if not self.time_limit > 0:
            raise ValueError(f"time_limit must be positive, got {self.time_limit}")
        if not self.feasibility_tolerance > 0:
            raise ValueError("feasibility_tolerance must be positive")

    def initial_lp_config(self, **overrides) -> FolpConfig:
        overrides.setdefault("max_iterations", self.initial_max_iterations)
        overrides.setdefault("time_limit", self.time_limit)
        return FolpConfig.initial(self.initial_tolerance, **overrides)

    def final_lp_config(self, **overrides) -> FolpConfig:
        overrides.setdefault("max_iterations", self.final_max_iterations)
        overrides.setdefault("time_limit", self.time_limit)
        return FolpConfig.final(self.final_tolerance, **overrides)

    def resolved_node_limit(self, num_integers: int) -> int:
        if self.node_limit is not None:
            return self.node_limit
        return max(100 * num_integers, 1)

    @classmethod
    def from_env(cls) -> "HeuristicConfig":
        """Create config from environment variables"""
        return cls(
            strategy=os.getenv("FIXPROP_STRATEGY", VariableStrategy.FRAC.value),
            tiebreaker=os.getenv("FIXPROP_TIEBREAK", Tiebreaker.NONE.value),
            initial_tolerance=_env_float("FIXPROP_INIT_TOL", 1e-4),
            final_tolerance=_env_float("FIXPROP_FINAL_TOL", 1e-8),
            seed=_env_int("FIXPROP_SEED", 0),
            time_limit=_env_float("FIXPROP_TIME_LIMIT", math.inf),
            backtrack_limit=_env_float("FIXPROP_BACKTRACK_LIMIT", 1000),
        )
