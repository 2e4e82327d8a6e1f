import logging
import re
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Iterable

import numpy as np

from common.errors import MalformedReport, NoReportsFound

from .models import Aggregate, Microbenchmark, SuiteTime, SurefireTotals

logger = logging.getLogger(__name__)

TIME_PATTERN = re.compile(r"^\d+(\.\d+)?$")
SUITE_TAGS = ("testsuite", "testsuites")


def _parse_time(value: str | None, path: Path) -> float:
    if value is None:
        raise MalformedReport("root element has no time attribute", str(path))
    value = value.strip()
    if not TIME_PATTERN.match(value):
        raise MalformedReport(f"unparsable time attribute {value!r}", str(path))
    return float(value)


def parse_report(path: Path) -> SuiteTime:
    """Read the root test-suite element of one Surefire report."""
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as e:
        raise MalformedReport(f"invalid XML ({e})", str(path)) from e
    if root.tag not in SUITE_TAGS:
        raise MalformedReport(f"unexpected root element <{root.tag}>", str(path))
    return SuiteTime(
        report=path.name,
        name=root.get("name", path.stem),
        seconds=_parse_time(root.get("time"), path),
        tests=int(root.get("tests", 0) or 0),
    )


def aggregate_seconds(values: Iterable[float], aggregate: Aggregate = "sum") -> float:
    values = list(values)
    if aggregate == "max":
        return float(max(values))
    if aggregate == "mean":
        return float(np.mean(values))
    return float(sum(values))


def parse_surefire_dir(directory: Path, aggregate: Aggregate = "sum") -> SurefireTotals:
    """
    Aggregate the suite times of every Surefire XML report in a directory.

    Args:
        directory: Directory holding ``*.xml`` reports (not searched recursively).
        aggregate: How suite times combine into the commit time.

    Returns:
        SurefireTotals: The total and the per-suite breakdown.
    """
    directory = Path(directory)
    reports = sorted(directory.glob("*.xml")) if directory.is_dir() else []
    if not reports:
        raise NoReportsFound(f"No XML reports in {directory}")
    suites = [parse_report(path) for path in reports]
    total = aggregate_seconds((s.seconds for s in suites), aggregate)
    logger.info(f"{directory}: {len(suites)} suites, {aggregate} = {total:.3f}s")
    return SurefireTotals(total_seconds=total, aggregate=aggregate, suites=suites)


def surefire_benchmark(directory: Path, key: str, aggregate: Aggregate = "sum") -> Microbenchmark:
    totals = parse_surefire_dir(directory, aggregate)
    if totals.total_seconds <= 0:
        raise MalformedReport(f"{aggregate} of suite times is not positive", str(directory))
    return Microbenchmark(key=key, seconds=totals.total_seconds, source="surefire-xml")


def collect_surefire_tree(root: Path, aggregate: Aggregate = "sum") -> list[Microbenchmark]:
    """One benchmark per sub-directory of ``root``, keyed by the sub-directory name."""
    root = Path(root)
    directories = sorted(p for p in root.iterdir() if p.is_dir()) if root.is_dir() else []
    if not directories:
        raise NoReportsFound(f"No report directories in {root}")
    return [surefire_benchmark(d, d.name, aggregate) for d in directories]
