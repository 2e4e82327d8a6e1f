import logging
from typing import Sequence

from common.errors import DuplicateTarget, MissingTarget
from predict.models import Dataset, DatasetMode, Observation
from represent.models import FeatureVector

from .models import Microbenchmark

logger = logging.getLogger(__name__)


def join_targets(
    vectors: Sequence[FeatureVector],
    benchmarks: Sequence[Microbenchmark],
    mode: DatasetMode = "rolling",
    files: dict[str, int] | None = None,
) -> Dataset:
    """
    Pair every feature vector with the execution time of the same key.

    Args:
        vectors: Representations keyed by commit hash (rolling) or file path (split).
        benchmarks: Microbenchmarks, at most one per key.
        mode: ``rolling`` orders by commit index, ``split`` keeps the input order.
        files: Optional source-file count per key, carried into the records.

    Returns:
        Dataset: Labelled observations.
    """
    targets: dict[str, Microbenchmark] = {}
    for benchmark in benchmarks:
        if benchmark.key in targets:
            raise DuplicateTarget(benchmark.key)
        targets[benchmark.key] = benchmark

    observations = []
    for vector in vectors:
        if vector.key not in targets:
            raise MissingTarget(vector.key)
        observations.append(
            Observation(
                key=vector.key,
                features=vector.values,
                target=targets[vector.key].seconds,
                index=vector.commit.index if mode == "rolling" and vector.commit else None,
                files=(files or {}).get(vector.key),
            )
        )

    unused = set(targets) - {v.key for v in vectors}
    if unused:
        logger.debug(f"{len(unused)} microbenchmarks have no matching vector")
    if mode == "rolling":
        observations.sort(key=lambda o: o.index)
    logger.info(f"Joined {len(observations)} observations ({mode})")
    return Dataset(mode=mode, observations=observations)


def expand_short_keys(benchmarks: Sequence[Microbenchmark], keys: Sequence[str]) -> list[Microbenchmark]:
    """Rewrite abbreviated commit hashes (7+ chars, unambiguous) to the full keys they abbreviate."""
    expanded = []
    for benchmark in benchmarks:
        if benchmark.key in keys or len(benchmark.key) < 7:
            expanded.append(benchmark)
            continue
        matches = [k for k in keys if k.startswith(benchmark.key)]
        if len(matches) == 1:
            expanded.append(benchmark.model_copy(update={"key": matches[0]}))
        else:
            expanded.append(benchmark)
    return expanded
