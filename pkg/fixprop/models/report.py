"""Per-run report of the fix-and-propagate heuristic"""

from typing import Optional

from pydantic import BaseModel, Field, model_validator


class ComponentTimings(BaseModel):
    """Wall-clock seconds per heuristic component"""

    reading: float = Field(default=0.0, ge=0.0)
    initial_lp: float = Field(default=0.0, ge=0.0)
    fix_and_propagate: float = Field(default=0.0, ge=0.0)
    final_lp: float = Field(default=0.0, ge=0.0)
    total: float = Field(default=0.0, ge=0.0)

    def components_sum(self) -> float:
        return self.reading + self.initial_lp + self.fix_and_propagate + self.final_lp


class RunReport(BaseModel):
    """Outcome of one heuristic run on one (possibly permuted) instance"""

    instance: str
    permutation: int = 0
    strategy: str
    tiebreaker: str
    initial_tolerance: float
    final_tolerance: float
    seed: int
    initial_lp_method: str = "pdhg"

    status: str
    found: bool = False
    objective: Optional[float] = None
    gap: Optional[float] = None
    reference: Optional[float] = None

    timings: ComponentTimings = Field(default_factory=ComponentTimings)
    nodes: int = 0
    backtracks: int = 0
    initial_lp_iterations: int = 0
    final_lp_iterations: int = 0
    initial_lp_status: Optional[str] = None
    final_lp_status: Optional[str] = None
    max_violation: Optional[float] = None
    message: Optional[str] = None

    @model_validator(mode="after")
    def _absent_when_not_found(self) -> "RunReport":
        if not self.found and (self.objective is not None or self.gap is not None):
            raise ValueError("objective and gap must be absent when no solution was found")
        return self

    @property
    def config_label(self) -> str:
        return (
            f"{self.strategy}/{self.tiebreaker}"
            f"/init={self.initial_tolerance:g}/final={self.final_tolerance:g}"
        ) + ("" if self.initial_lp_method == "pdhg" else f"/{self.initial_lp_method}")

    def to_json(self, include_timings: bool = True) -> str:
        if include_timings:
            return self.model_dump_json()
        return self.model_copy(update={"timings": ComponentTimings()}).model_dump_json()
