import math
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from common.timing import StageTiming

METRIC_NAMES = ("rmse", "mse", "mae", "rmsle")


class MetricSet(BaseModel):
    rmse: float = Field(..., ge=0)
    mse: float = Field(..., ge=0)
    mae: float = Field(..., ge=0)
    rmsle: float = Field(..., ge=0)

    @model_validator(mode="after")
    def check_finite(self) -> "MetricSet":
        if not all(math.isfinite(getattr(self, name)) for name in METRIC_NAMES):
            raise ValueError("Metrics must be finite")
        return self

    @property
    def rmmr(self) -> float:
        """Arithmetic mean of the four metrics."""
        return (self.rmse + self.mse + self.mae + self.rmsle) / 4

    def as_dict(self) -> dict[str, float]:
        return {**{name: getattr(self, name) for name in METRIC_NAMES}, "rmmr": self.rmmr}


class DeltaImpact(BaseModel):
    earlier_pair: str = Field(..., description="Label of the earlier rolling pair")
    later_pair: str = Field(..., description="Label of the following rolling pair")
    delta: float = Field(..., description="rmmr(earlier) - rmmr(later)")
    sign: Literal["positive", "negative"]
    metric_deltas: dict[str, float] = Field(default_factory=dict, description="Per-metric earlier - later")

    @model_validator(mode="after")
    def check_sign(self) -> "DeltaImpact":
        expected = "positive" if self.delta > 0 else "negative"
        if self.sign != expected:
            raise ValueError(f"delta {self.delta} must be {expected}")
        return self


class PairSummary(BaseModel):
    """One row of the per-pair table."""

    pair: str
    train_key: str
    test_key: str
    predicted: float
    actual: float
    target_delta: float = Field(..., description="actual - predicted, seconds")
    train_files: Optional[int] = None
    test_files: Optional[int] = None
    rmse: float
    mse: float
    mae: float
    rmsle: float
    rmmr: float


class LatencySummary(BaseModel):
    train_seconds: float = Field(..., ge=0, description="Mean fit time per record")
    predict_seconds: float = Field(..., ge=0, description="Mean predict time per record")
    latency_seconds: float = Field(..., ge=0, description="Mean train + predict time per record")


class TimingSummary(BaseModel):
    stages: list[StageTiming] = Field(default_factory=list)
    by_family: dict[str, dict[str, float]] = Field(
        default_factory=dict, description="Stage to syntactic/lexical seconds, for stages timed per class"
    )
    latency: LatencySummary
    nr_sr_ratio: Optional[float] = Field(None, description="NR seconds over SR seconds when both were timed")


class Report(BaseModel):
    records: list[PairSummary]
    means: dict[str, float] = Field(..., description="Column means of rmse, mse, mae, rmsle, rmmr")
    overall_rmmr: float
    impacts: list[DeltaImpact] = Field(default_factory=list)
    positive: int = 0
    negative: int = 0
    timing: Optional[TimingSummary] = Field(None, description="Wall-clock figures, kept out of report.json")
