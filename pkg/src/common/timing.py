import logging
import time
from typing import Callable, Literal, TypeVar

from pydantic import BaseModel, Field, model_validator

logger = logging.getLogger(__name__)

T = TypeVar("T")

StageName = Literal["selection", "sr", "nr", "fit", "predict"]


class StageTiming(BaseModel):
    stage: StageName = Field(..., description="Timed pipeline stage")
    seconds: float = Field(..., ge=0, description="Wall-clock seconds")
    breakdown: dict[str, float] = Field(default_factory=dict, description="Per-class seconds (selection only)")

    @model_validator(mode="after")
    def check_breakdown(self) -> "StageTiming":
        if self.breakdown and abs(sum(self.breakdown.values()) - self.seconds) > 1e-6:
            raise ValueError(f"Breakdown of '{self.stage}' does not sum to {self.seconds}")
        return self

    @classmethod
    def from_breakdown(cls, stage: StageName, breakdown: dict[str, float]) -> "StageTiming":
        return cls(stage=stage, seconds=sum(breakdown.values()), breakdown=breakdown)


def time_stage(stage: StageName, thunk: Callable[[], T]) -> tuple[T, StageTiming]:
    """
    Run ``thunk`` under a monotonic clock.

    Args:
        stage: Name recorded in the timing.
        thunk: Zero-argument callable doing the work.

    Returns:
        tuple: The thunk's result and its StageTiming.
    """
    start = time.perf_counter()
    result = thunk()
    elapsed = time.perf_counter() - start
    timing = StageTiming(stage=stage, seconds=max(elapsed, 0.0))
    logger.debug(f"Stage {stage} took {timing.seconds:.6f}s")
    return result, timing
