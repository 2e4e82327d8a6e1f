import json
import logging
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, Sequence, Type, TypeVar

from pydantic import BaseModel, TypeAdapter

from .errors import PaceError

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)


def write_json(path: Path, payload: Any) -> Path:
    """
    Write ``payload`` as UTF-8 JSON with LF line endings.

    Pydantic models (or lists of them) are dumped in JSON mode first so the
    output only depends on their values.
    """
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    elif isinstance(payload, (list, tuple)) and payload and isinstance(payload[0], BaseModel):
        payload = [item.model_dump(mode="json") for item in payload]

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        json.dump(payload, f, indent=2, ensure_ascii=False)
        f.write("\n")
    return path


def read_json(path: Path) -> Any:
    try:
        with Path(path).open(encoding="utf-8") as f:
            return json.load(f)
    except Exception:
        logger.exception(f"Failed to read JSON from {path}")
        raise


def read_model(path: Path, model: Type[M]) -> M:
    return model.model_validate(read_json(path))


def read_models(path: Path, model: Type[M]) -> list[M]:
    return TypeAdapter(list[model]).validate_python(read_json(path))


def write_models(path: Path, models: Sequence[BaseModel]) -> Path:
    return write_json(path, [m.model_dump(mode="json") for m in models])


@contextmanager
def output_lock(out_dir: Path, name: str) -> Iterator[Path]:
    """Hold an exclusive lock file in ``out_dir`` for the duration of a run."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lock_path = out_dir / name
    try:
        fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise PaceError(f"Another run holds {lock_path}; remove it if no run is active") from None
    try:
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        yield lock_path
    finally:
        lock_path.unlink(missing_ok=True)
