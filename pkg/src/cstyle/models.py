import json
from functools import cached_property
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from common import paths
from snapshot.models import CommitRef

CLASS_NAMES = ("Statements", "Controls", "Expressions", "Invocations", "Declarations")
TAXONOMY_SIZE = 42

Family = Literal["syntactic", "lexical"]


class FeatureClass(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: Family = Field(..., description="Syntactic or lexical feature family")
    types: tuple[str, ...] = Field(..., description="Node-type names of the class, in table order")


class FeatureTaxonomy(BaseModel):
    """The 42 node types, their five classes and the parser kinds that map onto them."""

    model_config = ConfigDict(frozen=True)

    classes: dict[str, FeatureClass] = Field(..., description="Class name to its types")
    kind_map: dict[str, str] = Field(..., description="Parser node kind to taxonomy type")

    @model_validator(mode="after")
    def check_taxonomy(self) -> "FeatureTaxonomy":
        if tuple(self.classes) != CLASS_NAMES:
            raise ValueError(f"Taxonomy classes must be {CLASS_NAMES}, got {tuple(self.classes)}")
        types = [t for cls in self.classes.values() for t in cls.types]
        if len(types) != TAXONOMY_SIZE or len(set(types)) != TAXONOMY_SIZE:
            raise ValueError(f"Taxonomy must hold {TAXONOMY_SIZE} distinct types, got {len(set(types))}")
        unknown = set(self.kind_map.values()) - set(types)
        if unknown:
            raise ValueError(f"kind_map targets unknown types: {sorted(unknown)}")
        if len(set(self.kind_map.values())) != len(self.kind_map):
            raise ValueError("kind_map must map distinct parser kinds to distinct types")
        return self

    @classmethod
    def load(cls, path: Optional[Path] = None) -> "FeatureTaxonomy":
        path = path or paths.TAXONOMY_FILE
        with Path(path).open(encoding="utf-8") as f:
            return cls.model_validate(json.load(f))

    @cached_property
    def types(self) -> tuple[str, ...]:
        return tuple(t for cls in self.classes.values() for t in cls.types)

    @cached_property
    def class_of(self) -> dict[str, str]:
        return {t: name for name, cls in self.classes.items() for t in cls.types}

    def family_of(self, type_name: str) -> Family:
        return self.classes[self.class_of[type_name]].family

    def kinds_of(self, class_name: str) -> dict[str, str]:
        """Parser kinds whose type belongs to ``class_name``."""
        members = set(self.classes[class_name].types)
        return {kind: t for kind, t in self.kind_map.items() if t in members}


class ParseFailure(BaseModel):
    path: str = Field(..., description="File that failed to parse")
    line: Optional[int] = Field(None, description="Line of the first error")
    column: Optional[int] = Field(None, description="Column of the first error")
    message: str = Field(..., description="Parser message")


class SelectionTiming(BaseModel):
    parse_seconds: float = Field(0.0, ge=0)
    selection_seconds_per_class: dict[str, float] = Field(default_factory=dict)

    @property
    def selection_seconds(self) -> float:
        return sum(self.selection_seconds_per_class.values())


class FeatureCounts(BaseModel):
    key: str = Field(..., description="Commit hash, or file path for per-file counts")
    commit: CommitRef = Field(..., description="Snapshot the counts were selected from")
    corpus_chars: int = Field(..., ge=0, description="Characters of the parsed corpus")
    per_type: dict[str, int] = Field(..., description="Occurrences per taxonomy type")
    class_totals: dict[str, int] = Field(default_factory=dict)
    token_sequence: list[str] = Field(default_factory=list, description="Matched types in file then preorder order")
    total_files: int = Field(0, ge=0, description="Files whose trees were counted")
    skipped_files: list[ParseFailure] = Field(default_factory=list)
    timing: SelectionTiming = Field(default_factory=SelectionTiming)

    @model_validator(mode="after")
    def check_counts(self) -> "FeatureCounts":
        if any(v < 0 for v in self.per_type.values()):
            raise ValueError("Counts must be non-negative")
        if sum(self.per_type.values()) != len(self.token_sequence):
            raise ValueError("per_type does not add up to the token sequence length")
        return self
