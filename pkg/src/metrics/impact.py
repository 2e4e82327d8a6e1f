from typing import Sequence

from common.errors import TooFewRecords
from predict.models import PredictionRecord

from .models import METRIC_NAMES, DeltaImpact


def delta_impacts(records: Sequence[PredictionRecord]) -> list[DeltaImpact]:
    """
    Compare each rolling pair with the one after it.

    The impact is positive only when the later pair's rmmr is strictly lower;
    an unchanged error counts as negative.

    Args:
        records: Prediction records in rolling order

    Returns:
        list: ``len(records) - 1`` impacts
    """
    if len(records) < 2:
        raise TooFewRecords(f"Delta impacts need at least 2 records, got {len(records)}")

    impacts = []
    for earlier, later in zip(records, records[1:]):
        delta = earlier.rmmr - later.rmmr
        impacts.append(
            DeltaImpact(
                earlier_pair=earlier.pair,
                later_pair=later.pair,
                delta=delta,
                sign="positive" if delta > 0 else "negative",
                metric_deltas={
                    name: getattr(earlier.metrics, name) - getattr(later.metrics, name) for name in METRIC_NAMES
                },
            )
        )
    return impacts
