import logging
import os
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from bench.models import Aggregate
from common.data import read_json, write_json
from common.errors import ConfigError
from predict.models import PredictorKind
from represent.models import Mode, Pooling

logger = logging.getLogger(__name__)

DEFAULT_SEED = 42


class PipelineConfig(BaseModel):
    """Everything one ``pace run`` needs, validated before any stage starts."""

    repo_path: Path = Field(..., description="Git repository to analyse")
    branch: Optional[str] = Field(None, description="Branch to walk, HEAD when unset")
    max_commits: int = Field(5, gt=0)
    extension: str = Field(".java", description="Source file extension to extract")
    parse_policy: Literal["skip", "abort"] = "skip"
    mode: Mode = Field("sr", description="Representation: statistical (sr) or neural (nr)")
    pooling: Pooling = "flatten"
    seed: int = DEFAULT_SEED
    benchmark_format: Literal["surefire", "csv"] = "surefire"
    benchmark_path: Optional[Path] = Field(
        None, description="Surefire directory (or tree with one sub-directory per commit), or a times CSV"
    )
    benchmark_key: Optional[str] = Field(None, description="Commit the single Surefire directory belongs to")
    aggregate: Aggregate = "sum"
    dataset_mode: Literal["rolling", "split"] = "rolling"
    predictor: PredictorKind = "knn"
    k: int = Field(5, ge=1)
    ridge_lambda: float = Field(1.0, ge=0)
    window: int = Field(1, ge=1)
    standardize: bool = False
    train_fraction: float = Field(0.8, gt=0, lt=1)
    output_dir: Path = Path("pace-out")
    force: bool = False

    @model_validator(mode="before")
    @classmethod
    def seed_from_environment(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("seed") is None and os.environ.get("PACE_SEED"):
            data = {**data, "seed": os.environ["PACE_SEED"]}
        return data

    @field_validator("extension")
    @classmethod
    def check_extension(cls, value: str) -> str:
        if not value.startswith(".") or len(value) < 2:
            raise ValueError(f"Extension must look like '.java', got '{value}'")
        return value

    @classmethod
    def build(cls, **values) -> "PipelineConfig":
        """Validate ``values``, turning validation failures into ConfigError."""
        values = {k: v for k, v in values.items() if v is not None}
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigError(f"Invalid configuration: {e}") from e

    @classmethod
    def read_values(cls, path: Path) -> dict[str, Any]:
        """Raw values of a JSON (``.json``) or ``key=value`` configuration file."""
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"Configuration file not found: {path}")
        if path.suffix == ".json":
            try:
                values = read_json(path)
            except ValueError as e:
                raise ConfigError(f"Invalid JSON in {path}: {e}") from e
            if not isinstance(values, dict):
                raise ConfigError(f"{path} must hold a JSON object")
        else:
            values = cls._parse_key_values(path)
        unknown = set(values) - set(cls.model_fields)
        if unknown:
            raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
        return values

    @staticmethod
    def _parse_key_values(path: Path) -> dict[str, str]:
        values = {}
        for n, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{n}: expected key=value, got '{line}'")
            if value.strip():
                values[key.strip()] = value.strip()
        return values

    @classmethod
    def from_file(cls, path: Path, **overrides) -> "PipelineConfig":
        """Load a configuration file; non-None ``overrides`` win over file values."""
        values = cls.read_values(path)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls.build(**values)

    def to_file(self, path: Path) -> Path:
        path = Path(path)
        values = self.model_dump(mode="json", exclude_none=True)
        if path.suffix == ".json":
            return write_json(path, values)
        lines = [f"{key}={str(value).lower() if isinstance(value, bool) else value}" for key, value in values.items()]
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
        return path
