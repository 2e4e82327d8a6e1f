"""Statistical representation: one FE value per node type."""

import logging
import math
import time
from typing import Optional

from common.errors import CountExceedsCorpus, InvalidCorpus
from cstyle.models import FeatureCounts, FeatureTaxonomy

from .models import RepresentationTiming, SRVector

logger = logging.getLogger(__name__)


def fe(count: int, corpus_chars: int) -> float:
    """
    Feature-extractor transform ``-log10(count / corpus_chars)``.

    An absent feature (``count == 0``) maps to 0, the same value a feature
    covering the whole corpus gets.
    """
    if corpus_chars < 1:
        raise InvalidCorpus(f"Corpus size must be positive, got {corpus_chars}")
    if count < 0:
        raise ValueError(f"Negative feature count {count}")
    if count > corpus_chars:
        raise CountExceedsCorpus(f"Count {count} exceeds corpus size {corpus_chars}")
    if count == 0:
        return 0.0
    return 0.0 - math.log10(count / corpus_chars)


def represent_sr(counts: FeatureCounts, taxonomy: Optional[FeatureTaxonomy] = None) -> SRVector:
    """
    Transform the counts of a snapshot into its statistical representation.

    Args:
        counts: Selected feature counts.
        taxonomy: Fixes the vector order; the packaged table when omitted.

    Returns:
        SRVector: 42 FE values in taxonomy order, timed per class.
    """
    taxonomy = taxonomy or FeatureTaxonomy.load()
    if counts.corpus_chars < 1:
        raise InvalidCorpus(f"{counts.key}: corpus of {counts.corpus_chars} chars cannot be represented")

    by_type = {}
    seconds_per_class = {}
    for class_name, feature_class in taxonomy.classes.items():
        start = time.perf_counter()
        for type_name in feature_class.types:
            by_type[type_name] = fe(counts.per_type.get(type_name, 0), counts.corpus_chars)
        seconds_per_class[class_name] = time.perf_counter() - start

    timing = RepresentationTiming(
        representation_seconds=sum(seconds_per_class.values()), seconds_per_class=seconds_per_class
    )
    return SRVector(
        commit=counts.commit, key=counts.key, values=[by_type[t] for t in taxonomy.types], timing=timing
    )
