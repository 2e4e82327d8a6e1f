"""Code-stylometry feature selection over a snapshot's syntax trees."""

import logging
import time
from collections import Counter
from dataclasses import dataclass
from typing import Literal, Optional

from javalang.tree import CompilationUnit
from tqdm import tqdm

from common.errors import EmptyCorpus, UnparsableCorpus
from snapshot.models import CommitSnapshot
from snapshot.utils import read_source

from .models import FeatureCounts, FeatureTaxonomy, ParseFailure, SelectionTiming
from .parser import parse_source

logger = logging.getLogger(__name__)

ParsePolicy = Literal["skip", "abort"]


@dataclass(frozen=True, slots=True)
class ParsedFile:
    path: str
    chars: int
    tree: CompilationUnit


def _parse_snapshot(
    snapshot: CommitSnapshot, on_parse_failure: ParsePolicy
) -> tuple[list[ParsedFile], list[ParseFailure], float]:
    parsed, failures = [], []
    start = time.perf_counter()
    for rel in tqdm(snapshot.files, desc=f"Parsing {snapshot.commit.short}", unit="file", disable=None, leave=False):
        text = read_source(snapshot.root / rel)
        result = parse_source(text, rel)
        if isinstance(result, ParseFailure):
            logger.warning(f"Cannot parse {rel} (line {result.line}): {result.message}")
            failures.append(result)
        else:
            parsed.append(ParsedFile(rel, len(text), result))
    parse_seconds = time.perf_counter() - start

    if failures and on_parse_failure == "abort":
        paths = [f.path for f in failures]
        raise UnparsableCorpus(f"{len(failures)} unparsable files in {snapshot.commit.short}: {paths[:5]}", paths)
    return parsed, failures, parse_seconds


def _match(
    files: list[ParsedFile], taxonomy: FeatureTaxonomy
) -> tuple[list[tuple[int, int, str]], dict[str, float]]:
    """
    Traverse every tree once per feature class, in preorder.

    Returns the matches as ``(file position, preorder position, type)`` and
    the seconds spent on each class.
    """
    matches = []
    seconds_per_class = {}
    for class_name in taxonomy.classes:
        kinds = taxonomy.kinds_of(class_name)
        start = time.perf_counter()
        for file_pos, parsed in enumerate(files):
            for node_pos, (_, node) in enumerate(parsed.tree):
                type_name = kinds.get(type(node).__name__)
                if type_name is not None:
                    matches.append((file_pos, node_pos, type_name))
        seconds_per_class[class_name] = time.perf_counter() - start
    matches.sort()
    return matches, seconds_per_class


def class_totals(counts: FeatureCounts, taxonomy: Optional[FeatureTaxonomy] = None) -> dict[str, int]:
    """Sum the per-type counts within each of the five classes."""
    taxonomy = taxonomy or FeatureTaxonomy.load()
    totals = {name: 0 for name in taxonomy.classes}
    for type_name, count in counts.per_type.items():
        totals[taxonomy.class_of[type_name]] += count
    return totals


def _build_counts(
    key: str,
    snapshot: CommitSnapshot,
    files: list[ParsedFile],
    failures: list[ParseFailure],
    parse_seconds: float,
    taxonomy: FeatureTaxonomy,
) -> FeatureCounts:
    matches, seconds_per_class = _match(files, taxonomy)
    sequence = [type_name for _, _, type_name in matches]
    observed = Counter(sequence)
    per_type = {t: observed.get(t, 0) for t in taxonomy.types}
    counts = FeatureCounts(
        key=key,
        commit=snapshot.commit,
        corpus_chars=sum(f.chars for f in files),
        per_type=per_type,
        token_sequence=sequence,
        total_files=len(files),
        skipped_files=failures,
        timing=SelectionTiming(parse_seconds=parse_seconds, selection_seconds_per_class=seconds_per_class),
    )
    counts.class_totals = class_totals(counts, taxonomy)
    return counts


def select_features(
    snapshot: CommitSnapshot,
    taxonomy: Optional[FeatureTaxonomy] = None,
    on_parse_failure: ParsePolicy = "skip",
) -> FeatureCounts:
    """
    Count the taxonomy's node types over the whole corpus of a snapshot.

    Args:
        snapshot: Materialized commit.
        taxonomy: Node-type taxonomy; the packaged table when omitted.
        on_parse_failure: ``skip`` drops unparsable files from counts and corpus
            size, ``abort`` fails the snapshot when any file does not parse.

    Returns:
        FeatureCounts: Counts keyed by the commit hash.
    """
    if snapshot.total_files == 0:
        raise EmptyCorpus(f"{snapshot.commit.short} has no {snapshot.extension} files")
    taxonomy = taxonomy or FeatureTaxonomy.load()
    files, failures, parse_seconds = _parse_snapshot(snapshot, on_parse_failure)
    counts = _build_counts(snapshot.commit.hash, snapshot, files, failures, parse_seconds, taxonomy)
    logger.info(
        f"{snapshot.commit.short}: {len(counts.token_sequence)} features over {len(files)} files "
        f"({len(failures)} skipped) in {counts.timing.selection_seconds:.4f}s"
    )
    return counts


def select_file_features(
    snapshot: CommitSnapshot,
    taxonomy: Optional[FeatureTaxonomy] = None,
    on_parse_failure: ParsePolicy = "skip",
) -> list[FeatureCounts]:
    """Per-file variant of :func:`select_features`, keyed by relative path (file-level split mode)."""
    if snapshot.total_files == 0:
        raise EmptyCorpus(f"{snapshot.commit.short} has no {snapshot.extension} files")
    taxonomy = taxonomy or FeatureTaxonomy.load()
    files, failures, parse_seconds = _parse_snapshot(snapshot, on_parse_failure)
    per_file = []
    for parsed in files:
        if parsed.chars == 0:
            logger.warning(f"Skipping empty file {parsed.path}")
            continue
        per_file.append(_build_counts(parsed.path, snapshot, [parsed], [], parse_seconds / len(files), taxonomy))
    logger.info(f"{snapshot.commit.short}: per-file features for {len(per_file)} files")
    return per_file
