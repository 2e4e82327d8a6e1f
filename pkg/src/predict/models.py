from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from metrics.models import MetricSet

DatasetMode = Literal["rolling", "split"]
PredictorKind = Literal["knn", "ridge"]


class Observation(BaseModel):
    key: str = Field(..., description="Commit hash or file path")
    features: list[float]
    target: float = Field(..., gt=0, description="Execution time in seconds")
    index: Optional[int] = Field(None, ge=0, description="Commit index (rolling mode)")
    files: Optional[int] = Field(None, ge=0, description="Source files behind the observation")


class Dataset(BaseModel):
    mode: DatasetMode
    observations: list[Observation]

    @model_validator(mode="after")
    def check_observations(self) -> "Dataset":
        dims = {len(o.features) for o in self.observations}
        if len(dims) > 1:
            raise ValueError(f"Observations have mixed feature dimensions {sorted(dims)}")
        if self.mode == "rolling":
            indices = [o.index for o in self.observations]
            if any(i is None for i in indices):
                raise ValueError("Rolling observations need commit indices")
            if indices and indices != list(range(indices[0], indices[0] + len(indices))):
                raise ValueError(f"Rolling commit indices must be contiguous and ascending, got {indices}")
        return self

    @property
    def feature_dim(self) -> int:
        return len(self.observations[0].features) if self.observations else 0

    @property
    def keys(self) -> list[str]:
        return [o.key for o in self.observations]

    def __len__(self) -> int:
        return len(self.observations)

    def subset(self, positions: list[int]) -> "Dataset":
        return Dataset(mode="split", observations=[self.observations[i] for i in positions])


class PredictorSpec(BaseModel):
    kind: PredictorKind = "knn"
    k: int = Field(5, ge=1, description="Neighbours for knn, clamped to the training size")
    l2_lambda: float = Field(1.0, ge=0, description="Ridge penalty")
    floor: float = Field(1e-6, gt=0, description="Lower bound on ridge predictions")
    standardize: bool = Field(False, description="z-score features before fitting")


class PredictionTiming(BaseModel):
    train_seconds: float = Field(0.0, ge=0)
    predict_seconds: float = Field(0.0, ge=0)

    @property
    def latency_seconds(self) -> float:
        return self.train_seconds + self.predict_seconds


class PredictionRecord(BaseModel):
    train_key: str = Field(..., description="Newest training key")
    train_keys: list[str] = Field(default_factory=list, description="Every key in the training window")
    test_key: str
    pair: str = Field(..., description="Human label, e.g. 'c_n, c_n-1'")
    predicted: float = Field(..., gt=0)
    actual: float = Field(..., gt=0)
    metrics: MetricSet
    rmmr: float
    train_files: Optional[int] = None
    test_files: Optional[int] = None
    timing: PredictionTiming = Field(default_factory=PredictionTiming)

    @model_validator(mode="after")
    def check_rmmr(self) -> "PredictionRecord":
        if abs(self.rmmr - self.metrics.rmmr) > 1e-12:
            raise ValueError("rmmr must be the mean of the four metrics")
        return self

    @property
    def target_delta(self) -> float:
        return self.actual - self.predicted


class SplitResult(BaseModel):
    records: list[PredictionRecord]
    aggregate: MetricSet
    train_keys: list[str]
    test_keys: list[str]
