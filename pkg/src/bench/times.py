import logging
import math
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from common.errors import MalformedRow, NonPositiveTime

from .models import Microbenchmark

logger = logging.getLogger(__name__)

HEADER = ["key", "seconds"]


def parse_times_csv(path: Path) -> list[Microbenchmark]:
    """
    Read a ``key,seconds`` CSV into microbenchmarks.

    Rows are numbered from 1 after the header in error messages.
    """
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise MalformedRow("empty file, expected a key,seconds header", 0) from e
    except pd.errors.ParserError as e:
        raise MalformedRow(f"unreadable CSV ({e})", 0) from e
    if list(df.columns) != HEADER:
        raise MalformedRow(f"expected header {','.join(HEADER)}, got {','.join(df.columns)}", 0)

    benchmarks = []
    for row, (key, raw) in enumerate(df.itertuples(index=False, name=None), start=1):
        if not key:
            raise MalformedRow("empty key", row)
        try:
            seconds = float(raw)
        except ValueError:
            raise MalformedRow(f"non-numeric seconds {raw!r}", row) from None
        if not math.isfinite(seconds):
            raise MalformedRow(f"non-finite seconds {raw!r}", row)
        if seconds <= 0:
            raise NonPositiveTime(f"seconds must be positive, got {raw}", row)
        benchmarks.append(Microbenchmark(key=key, seconds=seconds, source="csv"))
    logger.info(f"Loaded {len(benchmarks)} microbenchmarks from {path}")
    return benchmarks


def format_seconds(seconds: float) -> str:
    """Dot separator, at most six fractional digits."""
    return np.format_float_positional(seconds, precision=6, unique=True, trim="0")


def write_times_csv(benchmarks: Sequence[Microbenchmark], path: Path) -> Path:
    """Write ``benchmarks`` as ``key,seconds``; times that would read back as zero are refused."""
    seconds = []
    for row, b in enumerate(benchmarks, start=1):
        text = format_seconds(b.seconds)
        if float(text) <= 0:
            raise NonPositiveTime(f"{b.key}: {b.seconds} s rounds to {text} at six decimals", row)
        seconds.append(text)
    df = pd.DataFrame({"key": [b.key for b in benchmarks], "seconds": seconds}, columns=HEADER)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    return path


def merge_benchmarks(existing: Sequence[Microbenchmark], updates: Sequence[Microbenchmark]) -> list[Microbenchmark]:
    """Replace entries of ``existing`` by key, appending new keys in order."""
    merged = {b.key: b for b in existing}
    for b in updates:
        merged[b.key] = b
    return list(merged.values())
