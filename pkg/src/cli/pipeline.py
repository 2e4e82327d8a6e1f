"""End-to-end orchestration: snapshot, extract, represent, bench, predict, report."""

import logging
import time
from collections import defaultdict
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Literal, Optional, Sequence

from bench.join import expand_short_keys, join_targets
from bench.models import Aggregate, Microbenchmark
from bench.surefire import collect_surefire_tree, surefire_benchmark
from bench.times import parse_times_csv, write_times_csv
from common import paths
from common.data import output_lock, read_json, read_model, read_models, write_json, write_models
from common.errors import (
    BenchmarkError,
    ConfigError,
    ExtractionError,
    PaceError,
    PredictionError,
    ReportError,
    RepresentationError,
    SnapshotError,
    StageFailed,
)
from common.timing import StageTiming, time_stage
from config.pipeline import PipelineConfig
from cstyle.models import FeatureCounts, FeatureTaxonomy
from cstyle.selector import select_features, select_file_features
from metrics.models import Report
from metrics.report import summarize, write_report_csv
from predict.models import Dataset, PredictionRecord, PredictorSpec
from predict.protocols import run_rolling, run_split
from represent.models import FeatureVector, Mode, Pooling, RepresentationTiming
from represent.neural import NeuralPairFeaturizer, represent_nr, train_embeddings
from represent.statistical import represent_sr
from snapshot.models import CommitSnapshot
from snapshot.series import snapshot_series

logger = logging.getLogger(__name__)

StageLabel = Literal["snapshot", "extract", "represent", "bench", "predict", "report"]

STAGES: tuple[StageLabel, ...] = ("snapshot", "extract", "represent", "bench", "predict", "report")

EXIT_CODES: dict[str, int] = {
    "snapshot": SnapshotError.exit_code,
    "extract": ExtractionError.exit_code,
    "represent": RepresentationError.exit_code,
    "bench": BenchmarkError.exit_code,
    "predict": PredictionError.exit_code,
    "report": ReportError.exit_code,
}


@contextmanager
def stage(name: StageLabel) -> Iterator[None]:
    """Label any PaceError escaping the block with the stage and its exit code."""
    logger.info(f"Stage {name} started")
    start = time.perf_counter()
    try:
        yield
    except StageFailed:
        raise
    except PaceError as e:
        logger.error(f"Stage {name} failed: {e}")
        raise StageFailed(name, EXIT_CODES[name], e) from e
    logger.info(f"Stage {name} finished in {time.perf_counter() - start:.3f}s")


# === Artifacts === #
def write_manifests(snapshots: Sequence[CommitSnapshot], manifests_dir: Path) -> None:
    for snapshot in snapshots:
        name = paths.snapshot_dirname(snapshot.commit.index, snapshot.commit.hash)
        write_json(Path(manifests_dir) / f"{name}.json", snapshot.manifest())


def load_snapshot(snapshot_dir: Path, manifest_path: Optional[Path] = None) -> CommitSnapshot:
    """Re-attach a materialized tree to its manifest (``../../manifests/<dir name>.json`` by default)."""
    snapshot_dir = Path(snapshot_dir).resolve()
    manifest_path = manifest_path or snapshot_dir.parent.parent / paths.MANIFESTS_DIR / f"{snapshot_dir.name}.json"
    if not Path(manifest_path).is_file():
        raise ExtractionError(f"No manifest for snapshot {snapshot_dir} at {manifest_path}")
    return CommitSnapshot.from_manifest(read_json(manifest_path), snapshot_dir)


def load_snapshots(out_dir: Path) -> list[CommitSnapshot]:
    manifests = sorted((Path(out_dir) / paths.MANIFESTS_DIR).glob("c_*.json"))
    if not manifests:
        raise ExtractionError(f"No snapshot manifests in {out_dir}; run the snapshot stage first")
    snapshots = [load_snapshot(Path(out_dir) / paths.SNAPSHOTS_DIR / m.stem, m) for m in manifests]
    return sorted(snapshots, key=lambda s: s.commit.index)


def load_counts(path: Path) -> list[FeatureCounts]:
    """A features file holds one FeatureCounts (per commit) or a list of them (per file)."""
    payload = read_json(path)
    if isinstance(payload, list):
        return [FeatureCounts.model_validate(item) for item in payload]
    return [FeatureCounts.model_validate(payload)]


def build_vectors(
    counts: Sequence[FeatureCounts],
    mode: Mode,
    seed: int = 42,
    pooling: Pooling = "flatten",
    taxonomy: Optional[FeatureTaxonomy] = None,
) -> list[FeatureVector]:
    """
    Represent every FeatureCounts with the chosen representation.

    NR embeddings are trained once over all the given sequences; the training
    time is shared evenly between the resulting vectors.
    """
    if mode == "sr":
        return [FeatureVector.from_sr(represent_sr(c, taxonomy)) for c in counts]

    model, training = time_stage("nr", lambda: train_embeddings([c.token_sequence for c in counts], seed))
    vectors = []
    for c in counts:
        vector = FeatureVector.from_nr(represent_nr(c, model), pooling)
        seconds = vector.timing.representation_seconds + training.seconds / len(counts)
        vectors.append(vector.model_copy(update={"timing": RepresentationTiming(representation_seconds=seconds)}))
    return vectors


def load_benchmarks(
    fmt: Literal["surefire", "csv"], path: Path, key: Optional[str] = None, aggregate: Aggregate = "sum"
) -> list[Microbenchmark]:
    if fmt == "csv":
        return parse_times_csv(path)
    if key:
        return [surefire_benchmark(path, key, aggregate)]
    return collect_surefire_tree(path, aggregate)


def stage_timings(
    counts: Sequence[FeatureCounts] = (),
    vectors: Sequence[FeatureVector] = (),
    records: Sequence[PredictionRecord] = (),
) -> list[StageTiming]:
    """Selection, representation, fit and predict timings recovered from the stage artifacts."""
    timings = []
    if counts:
        selection = defaultdict(float)
        for c in counts:
            for class_name, seconds in c.timing.selection_seconds_per_class.items():
                selection[class_name] += seconds
        timings.append(StageTiming.from_breakdown("selection", dict(selection)))
    for mode in ("sr", "nr"):
        subset = [v for v in vectors if v.mode == mode]
        if not subset:
            continue
        per_class = defaultdict(float)
        for v in subset:
            for class_name, seconds in v.timing.seconds_per_class.items():
                per_class[class_name] += seconds
        if per_class:
            timings.append(StageTiming.from_breakdown(mode, dict(per_class)))
        else:
            timings.append(StageTiming(stage=mode, seconds=sum(v.timing.representation_seconds for v in subset)))
    if records:
        timings.append(StageTiming(stage="fit", seconds=sum(r.timing.train_seconds for r in records)))
        timings.append(StageTiming(stage="predict", seconds=sum(r.timing.predict_seconds for r in records)))
    return timings


def write_report(report: Report, path: Path, csv_path: Optional[Path] = None, timings_path: Optional[Path] = None):
    """report.json stays free of wall-clock figures; those go to ``timings_path``."""
    write_json(path, report.model_dump(mode="json", exclude={"timing"}))
    if csv_path:
        write_report_csv(report, csv_path)
    if timings_path and report.timing is not None:
        write_json(timings_path, report.timing)


# === Pipeline === #
class Pipeline:
    """
    Runs the stages in order over one output directory.

    Every stage writes its artifacts before the next one starts, so a run can
    resume from any stage as long as the earlier artifacts are present.
    """

    def __init__(self, config: PipelineConfig, taxonomy: Optional[FeatureTaxonomy] = None):
        self.config = config
        self.out = Path(config.output_dir).resolve()
        self.taxonomy = taxonomy or FeatureTaxonomy.load()

    @property
    def features_dir(self) -> Path:
        return self.out / paths.FEATURES_DIR

    def snapshot(self) -> list[CommitSnapshot]:
        c = self.config
        snapshots = snapshot_series(
            c.repo_path, c.max_commits, self.out / paths.SNAPSHOTS_DIR, c.extension, c.branch, c.force
        )
        write_manifests(snapshots, self.out / paths.MANIFESTS_DIR)
        return snapshots

    def extract(self, snapshots: Sequence[CommitSnapshot]) -> list[FeatureCounts]:
        counts = []
        for snapshot in snapshots:
            selected = select_features(snapshot, self.taxonomy, self.config.parse_policy)
            name = paths.snapshot_dirname(snapshot.commit.index, snapshot.commit.hash)
            write_json(self.features_dir / f"{name}.json", selected)
            counts.append(selected)
        if self.config.dataset_mode == "split":
            newest = min(snapshots, key=lambda s: s.commit.index)
            per_file = select_file_features(newest, self.taxonomy, self.config.parse_policy)
            write_models(self.features_dir / paths.FILE_FEATURES_FILE, per_file)
        return counts

    def load_counts(self) -> list[FeatureCounts]:
        files = sorted(p for p in self.features_dir.glob("c_*.json"))
        if not files:
            raise RepresentationError(f"No features in {self.features_dir}; run the extract stage first")
        counts = [read_model(p, FeatureCounts) for p in files]
        return sorted(counts, key=lambda c: c.commit.index)

    def represented_counts(self, counts: Sequence[FeatureCounts]) -> list[FeatureCounts]:
        """Per-commit counts in rolling mode, per-file counts of the newest commit in split mode."""
        if self.config.dataset_mode == "rolling":
            return list(counts)
        return read_models(self.features_dir / paths.FILE_FEATURES_FILE, FeatureCounts)

    def represent(self, counts: Sequence[FeatureCounts]) -> list[FeatureVector]:
        c = self.config
        vectors = build_vectors(self.represented_counts(counts), c.mode, c.seed, c.pooling, self.taxonomy)
        write_models(self.out / paths.VECTORS_FILE, vectors)
        return vectors

    def load_vectors(self) -> list[FeatureVector]:
        return read_models(self.out / paths.VECTORS_FILE, FeatureVector)

    def bench(self, vectors: Sequence[FeatureVector], counts: Sequence[FeatureCounts] = ()) -> Dataset:
        c = self.config
        benchmarks = load_benchmarks(c.benchmark_format, c.benchmark_path, c.benchmark_key, c.aggregate)
        if c.dataset_mode == "rolling":
            benchmarks = expand_short_keys(benchmarks, [v.key for v in vectors])
        write_times_csv(benchmarks, self.out / paths.TIMES_FILE)
        return self.join(vectors, counts)

    def join(self, vectors: Sequence[FeatureVector], counts: Sequence[FeatureCounts] = ()) -> Dataset:
        # Always from times.csv so a resumed run sees the same rounded targets
        benchmarks = parse_times_csv(self.out / paths.TIMES_FILE)
        files = {c.key: c.total_files for c in counts}
        return join_targets(vectors, benchmarks, self.config.dataset_mode, files)

    def predict(self, dataset: Dataset, counts: Sequence[FeatureCounts]) -> list[PredictionRecord]:
        c = self.config
        spec = PredictorSpec(kind=c.predictor, k=c.k, l2_lambda=c.ridge_lambda, standardize=c.standardize)
        if c.dataset_mode == "rolling":
            featurizer = NeuralPairFeaturizer(counts, c.seed, pooling=c.pooling) if c.mode == "nr" else None
            records = run_rolling(dataset, spec, c.window, featurizer)
        else:
            records = run_split(dataset, spec, c.train_fraction, c.seed).records
        write_models(self.out / paths.PREDICTIONS_FILE, records)
        return records

    def load_records(self) -> list[PredictionRecord]:
        return read_models(self.out / paths.PREDICTIONS_FILE, PredictionRecord)

    def report(
        self,
        records: Sequence[PredictionRecord],
        counts: Sequence[FeatureCounts] = (),
        vectors: Sequence[FeatureVector] = (),
    ) -> Report:
        report = summarize(
            records,
            stage_timings(counts, vectors, records),
            rolling=self.config.dataset_mode == "rolling",
            taxonomy=self.taxonomy,
        )
        write_report(
            report,
            self.out / paths.REPORT_FILE,
            self.out / paths.REPORT_CSV_FILE,
            self.out / paths.TIMINGS_FILE,
        )
        return report

    def run(self, from_stage: StageLabel = "snapshot") -> Report:
        """
        Run every stage from ``from_stage`` on, reusing the artifacts of the earlier ones.

        Returns:
            Report: The final report, also written to the output directory.
        """
        if from_stage not in STAGES:
            raise ConfigError(f"Unknown stage '{from_stage}', expected one of {STAGES}")
        if self.config.benchmark_path is None and STAGES.index(from_stage) <= STAGES.index("bench"):
            raise ConfigError("benchmark_path is required to run the bench stage")
        first = STAGES.index(from_stage)

        def runs(name: StageLabel) -> bool:
            return STAGES.index(name) >= first

        with output_lock(self.out, paths.LOCK_FILE):
            self.config.to_file(self.out / paths.CONFIG_FILE)

            with stage("snapshot"):
                snapshots = self.snapshot() if runs("snapshot") else None
            with stage("extract"):
                if runs("extract"):
                    counts = self.extract(snapshots or load_snapshots(self.out))
            with stage("represent"):
                if not runs("extract"):
                    counts = self.load_counts()
                vectors = self.represent(counts) if runs("represent") else self.load_vectors()
            with stage("bench"):
                dataset = self.bench(vectors, counts) if runs("bench") else self.join(vectors, counts)
            with stage("predict"):
                if runs("predict"):
                    records = self.predict(dataset, self.represented_counts(counts))
                else:
                    records = self.load_records()
            with stage("report"):
                report = self.report(records, counts, vectors)

        logger.info(f"Report written to {self.out / paths.REPORT_FILE}")
        return report


def run_pipeline(config: PipelineConfig, from_stage: StageLabel = "snapshot") -> Report:
    return Pipeline(config).run(from_stage)
