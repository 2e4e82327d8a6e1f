import logging
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from common.timing import StageTiming
from cstyle.models import FeatureTaxonomy
from predict.models import PredictionRecord

from .impact import delta_impacts
from .models import METRIC_NAMES, LatencySummary, PairSummary, Report, TimingSummary

logger = logging.getLogger(__name__)

COLUMNS = (*METRIC_NAMES, "rmmr")


def _pair_summary(record: PredictionRecord) -> PairSummary:
    return PairSummary(
        pair=record.pair,
        train_key=record.train_key,
        test_key=record.test_key,
        predicted=record.predicted,
        actual=record.actual,
        target_delta=record.target_delta,
        train_files=record.train_files,
        test_files=record.test_files,
        **record.metrics.as_dict(),
    )


def _by_family(stages: Sequence[StageTiming], taxonomy: FeatureTaxonomy) -> dict[str, dict[str, float]]:
    by_family = {}
    for stage in stages:
        if not stage.breakdown:
            continue
        families = {"syntactic": 0.0, "lexical": 0.0}
        for class_name, seconds in stage.breakdown.items():
            families[taxonomy.classes[class_name].family] += seconds
        by_family[stage.stage] = families
    return by_family


def _timing_summary(
    records: Sequence[PredictionRecord], stages: Sequence[StageTiming], taxonomy: FeatureTaxonomy
) -> TimingSummary:
    latency = LatencySummary(
        train_seconds=sum(r.timing.train_seconds for r in records) / len(records),
        predict_seconds=sum(r.timing.predict_seconds for r in records) / len(records),
        latency_seconds=sum(r.timing.latency_seconds for r in records) / len(records),
    )
    seconds = {s.stage: s.seconds for s in stages}
    ratio = seconds["nr"] / seconds["sr"] if seconds.get("sr") and "nr" in seconds else None
    return TimingSummary(
        stages=list(stages), by_family=_by_family(stages, taxonomy), latency=latency, nr_sr_ratio=ratio
    )


def summarize(
    records: Sequence[PredictionRecord],
    stages: Sequence[StageTiming] = (),
    rolling: bool = True,
    taxonomy: Optional[FeatureTaxonomy] = None,
) -> Report:
    """
    Build the per-pair table, its column means and the delta impacts.

    Args:
        records: Prediction records, in rolling order when ``rolling``
        stages: Stage timings to fold into the report's timing section
        rolling: Whether consecutive records are comparable pairs
        taxonomy: Used to group per-class stage timings by family

    Returns:
        Report: The aggregate report
    """
    if not records:
        raise ValueError("Cannot summarize an empty list of records")
    taxonomy = taxonomy or FeatureTaxonomy.load()

    rows = [_pair_summary(r) for r in records]
    table = pd.DataFrame([row.model_dump() for row in rows])
    means = {name: float(table[name].mean()) for name in COLUMNS}

    impacts = delta_impacts(records) if rolling and len(records) > 1 else []
    positive = sum(1 for i in impacts if i.sign == "positive")
    report = Report(
        records=rows,
        means=means,
        overall_rmmr=means["rmmr"],
        impacts=impacts,
        positive=positive,
        negative=len(impacts) - positive,
        timing=_timing_summary(records, stages, taxonomy),
    )
    logger.info(
        f"Summarized {len(rows)} records: mean rmmr {report.overall_rmmr:.4f}, "
        f"{report.positive} positive / {report.negative} negative impacts"
    )
    return report


def write_report_csv(report: Report, path: Path) -> Path:
    """Flat per-pair table, one row per record, for external plotting."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame([row.model_dump() for row in report.records]).to_csv(path, index=False, lineterminator="\n")
    return path
