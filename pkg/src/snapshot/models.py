import re
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

HASH_PATTERN = re.compile(r"^[0-9a-f]{40}$")


class CommitRef(BaseModel):
    model_config = ConfigDict(frozen=True)

    hash: str = Field(..., description="40-hex-char commit identifier")
    index: int = Field(..., ge=0, description="0 is the newest selected commit, higher goes back in time")
    timestamp: Optional[int] = Field(None, description="Committer time, seconds since epoch")

    @field_validator("hash")
    @classmethod
    def check_hash(cls, value: str) -> str:
        if not HASH_PATTERN.match(value):
            raise ValueError(f"Not a full commit hash: {value!r}")
        return value

    @property
    def short(self) -> str:
        return self.hash[:7]

    @property
    def label(self) -> str:
        return "c_n" if self.index == 0 else f"c_n-{self.index}"


class CommitSnapshot(BaseModel):
    model_config = ConfigDict(frozen=True)

    commit: CommitRef = Field(..., description="Commit the tree was materialized from")
    root: Path = Field(..., description="Directory holding the materialized tree")
    extension: str = Field(".java", description="Source extension used to select files")
    files: tuple[str, ...] = Field(..., description="Relative POSIX paths of matched files, sorted")
    total_files: int = Field(..., ge=0)
    total_loc: int = Field(..., ge=0, description="Physical lines over matched files")
    total_chars: int = Field(..., ge=0, description="Characters over matched files")

    @model_validator(mode="after")
    def check_statistics(self) -> "CommitSnapshot":
        if self.total_files != len(self.files):
            raise ValueError(f"total_files={self.total_files} but {len(self.files)} files listed")
        if list(self.files) != sorted(self.files):
            raise ValueError("files must be sorted")
        # no total_loc >= total_files check: an empty source file has zero lines
        if self.total_chars < self.total_loc:
            raise ValueError(f"total_chars={self.total_chars} < total_loc={self.total_loc}")
        wrong = [f for f in self.files if not f.endswith(self.extension)]
        if wrong:
            raise ValueError(f"Files without extension {self.extension}: {wrong[:3]}")
        return self

    def manifest(self) -> dict:
        """Portable JSON form; the tree location is not part of it."""
        return {
            "hash": self.commit.hash,
            "index": self.commit.index,
            "timestamp": self.commit.timestamp,
            "extension": self.extension,
            "files": list(self.files),
            "total_files": self.total_files,
            "total_loc": self.total_loc,
            "total_chars": self.total_chars,
        }

    @classmethod
    def from_manifest(cls, manifest: dict, root: Path) -> "CommitSnapshot":
        return cls(
            commit=CommitRef(hash=manifest["hash"], index=manifest["index"], timestamp=manifest.get("timestamp")),
            root=root,
            extension=manifest.get("extension", ".java"),
            files=tuple(manifest["files"]),
            total_files=manifest["total_files"],
            total_loc=manifest["total_loc"],
            total_chars=manifest["total_chars"],
        )
