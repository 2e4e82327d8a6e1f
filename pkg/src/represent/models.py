from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from snapshot.models import CommitRef

EMBEDDING_DIM = 32
MAX_SEQUENCE_LENGTH = 64

Mode = Literal["sr", "nr"]
Pooling = Literal["flatten", "mean"]


class RepresentationTiming(BaseModel):
    representation_seconds: float = Field(0.0, ge=0)
    seconds_per_class: dict[str, float] = Field(default_factory=dict)


class SRVector(BaseModel):
    commit: CommitRef
    key: str = Field(..., description="Commit hash or file path")
    values: list[float] = Field(..., description="One FE value per taxonomy type, in taxonomy order")
    timing: RepresentationTiming = Field(default_factory=RepresentationTiming)

    @field_validator("values")
    @classmethod
    def check_values(cls, values: list[float]) -> list[float]:
        if any(v < 0 or not np.isfinite(v) for v in values):
            raise ValueError("FE values must be finite and non-negative")
        return values

    def by_family(self, taxonomy) -> dict[str, list[float]]:
        """Split into the syntactic and lexical sub-vectors."""
        families = {"syntactic": [], "lexical": []}
        for type_name, value in zip(taxonomy.types, self.values):
            families[taxonomy.family_of(type_name)].append(value)
        return families


class EmbeddingHyperparameters(BaseModel):
    model_config = ConfigDict(frozen=True)

    dim: Literal[32] = EMBEDDING_DIM
    window: int = Field(5, ge=1)
    epochs: int = Field(5, ge=1)
    negative_samples: int = Field(5, ge=1)
    learning_rate: float = Field(0.025, gt=0)
    min_learning_rate: float = Field(0.0001, gt=0)
    sample: float = Field(1e-3, ge=0, description="Downsampling threshold for frequent tokens")


class EmbeddingModel(BaseModel):
    vocabulary: dict[str, int] = Field(..., description="Token to row index")
    vectors: list[list[float]] = Field(..., description="|vocabulary| x 32 matrix")
    seed: int
    hyperparameters: EmbeddingHyperparameters = Field(default_factory=EmbeddingHyperparameters)

    @model_validator(mode="after")
    def check_matrix(self) -> "EmbeddingModel":
        matrix = np.asarray(self.vectors, dtype=float)
        if matrix.shape != (len(self.vocabulary), EMBEDDING_DIM):
            raise ValueError(f"Embedding matrix has shape {matrix.shape}")
        if not np.isfinite(matrix).all():
            raise ValueError("Embedding matrix has non-finite entries")
        return self

    def vector(self, token: str) -> list[float]:
        return self.vectors[self.vocabulary[token]]


class NRVector(BaseModel):
    commit: CommitRef
    key: str
    block: list[list[float]] = Field(..., description="64 x 32 token embeddings, zero rows for padding")
    length: int = Field(..., ge=0, le=MAX_SEQUENCE_LENGTH, description="Populated rows")
    timing: RepresentationTiming = Field(default_factory=RepresentationTiming)

    @model_validator(mode="after")
    def check_block(self) -> "NRVector":
        block = np.asarray(self.block, dtype=float)
        if block.shape != (MAX_SEQUENCE_LENGTH, EMBEDDING_DIM):
            raise ValueError(f"Block has shape {block.shape}")
        if np.any(block[self.length :]):
            raise ValueError("Padding rows must be zero")
        return self

    @property
    def flat(self) -> list[float]:
        """Row-major flattening, 2048 values."""
        return [value for row in self.block for value in row]

    def pooled(self) -> list[float]:
        """Mean over populated rows, 32 values (zeros when empty)."""
        if self.length == 0:
            return [0.0] * EMBEDDING_DIM
        return np.asarray(self.block[: self.length], dtype=float).mean(axis=0).tolist()

    def features(self, pooling: Pooling = "flatten") -> list[float]:
        return self.flat if pooling == "flatten" else self.pooled()


class FeatureVector(BaseModel):
    """Regression input for one commit (or file), whatever the representation."""

    key: str = Field(..., description="Commit hash (rolling) or file path (split)")
    commit: Optional[CommitRef] = None
    mode: Mode
    values: list[float]
    timing: RepresentationTiming = Field(default_factory=RepresentationTiming)

    @classmethod
    def from_sr(cls, vector: SRVector) -> "FeatureVector":
        return cls(key=vector.key, commit=vector.commit, mode="sr", values=vector.values, timing=vector.timing)

    @classmethod
    def from_nr(cls, vector: NRVector, pooling: Pooling = "flatten") -> "FeatureVector":
        return cls(
            key=vector.key, commit=vector.commit, mode="nr", values=vector.features(pooling), timing=vector.timing
        )
