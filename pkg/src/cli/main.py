"""``pace`` command line: one sub-command per stage plus ``run`` for the whole pipeline."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import config
from bench.join import expand_short_keys, join_targets
from bench.times import merge_benchmarks, parse_times_csv, write_times_csv
from common import paths
from common.data import read_models, write_json, write_models
from common.errors import PaceError, StageFailed
from config.pipeline import PipelineConfig
from cstyle.selector import select_features, select_file_features
from metrics.report import summarize
from predict.models import PredictionRecord, PredictorSpec
from predict.protocols import run_rolling, run_split
from represent.models import FeatureVector
from represent.neural import NeuralPairFeaturizer
from snapshot.series import snapshot_series

from .pipeline import (
    STAGES,
    Pipeline,
    build_vectors,
    load_benchmarks,
    load_counts,
    load_snapshot,
    stage,
    stage_timings,
    write_manifests,
    write_report,
)

logger = logging.getLogger(__name__)


# === Stage commands === #
def run_snapshot(args: argparse.Namespace) -> int:
    out = Path(args.out)
    with stage("snapshot"):
        snapshots = snapshot_series(
            args.repo, args.commits, out / paths.SNAPSHOTS_DIR, args.ext, args.branch, args.force
        )
        write_manifests(snapshots, out / paths.MANIFESTS_DIR)
    for s in snapshots:
        print(f"{s.commit.label}\t{s.commit.hash}\t{s.total_files} files\t{s.total_loc} lines")
    return 0


def run_extract(args: argparse.Namespace) -> int:
    with stage("extract"):
        snapshot = load_snapshot(args.snapshot, args.manifest)
        if args.per_file:
            write_models(args.out, select_file_features(snapshot, on_parse_failure=args.policy))
        else:
            write_json(args.out, select_features(snapshot, on_parse_failure=args.policy))
    return 0


def run_represent(args: argparse.Namespace) -> int:
    with stage("represent"):
        counts = [c for path in args.features for c in load_counts(path)]
        vectors = build_vectors(counts, args.mode, args.seed, args.pooling)
        write_models(args.out, vectors)
    return 0


def run_bench(args: argparse.Namespace) -> int:
    with stage("bench"):
        benchmarks = load_benchmarks(args.format, args.reports, args.key, args.aggregate)
        out = Path(args.out)
        if args.append and out.exists():
            benchmarks = merge_benchmarks(parse_times_csv(out), benchmarks)
        write_times_csv(benchmarks, out)
    return 0


def run_predict(args: argparse.Namespace) -> int:
    with stage("bench"):
        vectors = read_models(args.vectors, FeatureVector)
        benchmarks = parse_times_csv(args.times)
        if args.mode == "rolling":
            benchmarks = expand_short_keys(benchmarks, [v.key for v in vectors])
        dataset = join_targets(vectors, benchmarks, args.mode)
    with stage("predict"):
        spec = PredictorSpec(kind=args.model, k=args.k, l2_lambda=args.l2_lambda, standardize=args.standardize)
        if args.mode == "rolling":
            featurizer = None
            if args.features:
                counts = [c for path in args.features for c in load_counts(path)]
                featurizer = NeuralPairFeaturizer(counts, args.seed, pooling=args.pooling)
            records = run_rolling(dataset, spec, args.window, featurizer)
        else:
            records = run_split(dataset, spec, args.train_fraction, args.seed).records
        write_models(args.out, records)
    return 0


def run_report(args: argparse.Namespace) -> int:
    with stage("report"):
        records = read_models(args.predictions, PredictionRecord)
        counts = [c for path in args.features for c in load_counts(path)]
        vectors = [v for path in args.vectors for v in read_models(path, FeatureVector)]
        report = summarize(records, stage_timings(counts, vectors, records), rolling=args.mode == "rolling")
        timings = args.timings or Path(args.out).with_name(paths.TIMINGS_FILE)
        write_report(report, args.out, args.csv, timings)
    print(f"mean rmmr {report.overall_rmmr:.4f}, impacts +{report.positive}/-{report.negative}")
    return 0


def run_run(args: argparse.Namespace) -> int:
    overrides = {
        "repo_path": args.repo,
        "branch": args.branch,
        "max_commits": args.commits,
        "extension": args.ext,
        "parse_policy": args.policy,
        "mode": args.representation,
        "pooling": args.pooling,
        "seed": args.seed,
        "benchmark_path": args.reports,
        "benchmark_format": args.format,
        "benchmark_key": args.key,
        "aggregate": args.aggregate,
        "dataset_mode": args.mode,
        "predictor": args.model,
        "k": args.k,
        "ridge_lambda": args.l2_lambda,
        "window": args.window,
        "standardize": args.standardize,
        "train_fraction": args.train_fraction,
        "output_dir": args.out,
        "force": True if args.force else None,
    }
    if args.config:
        pipeline_config = PipelineConfig.from_file(args.config, **overrides)
    else:
        pipeline_config = PipelineConfig.build(**overrides)
    report = Pipeline(pipeline_config).run(args.from_stage)
    print(f"{len(report.records)} records, mean rmmr {report.overall_rmmr:.4f}")
    return 0


# === Parser === #
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pace", description="Predict the performance impact of code updates")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("snapshot", help="Materialize the most recent commits")
    p.add_argument("--repo", type=Path, required=True)
    p.add_argument("--commits", type=int, default=5)
    p.add_argument("--branch")
    p.add_argument("--ext", default=".java")
    p.add_argument("--out", type=Path, required=True, help="Writes snapshots/ and manifests/ here")
    p.add_argument("--force", action="store_true", help="Overwrite modified snapshot directories")
    p.set_defaults(func=run_snapshot)

    p = sub.add_parser("extract", help="Count the taxonomy's node types in one snapshot")
    p.add_argument("--snapshot", type=Path, required=True)
    p.add_argument("--manifest", type=Path, help="Defaults to ../../manifests/<snapshot name>.json")
    p.add_argument("--policy", choices=["skip", "abort"], default="skip")
    p.add_argument("--per-file", action="store_true", help="One FeatureCounts per file (split mode)")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=run_extract)

    p = sub.add_parser("represent", help="Turn feature counts into vectors")
    p.add_argument("--features", type=Path, nargs="+", required=True)
    p.add_argument("--mode", choices=["sr", "nr"], default="sr")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--pooling", choices=["flatten", "mean"], default="flatten")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=run_represent)

    p = sub.add_parser("bench", help="Collect execution times into times.csv")
    p.add_argument("--reports", type=Path, required=True, help="Surefire directory or tree, or a times CSV")
    p.add_argument("--format", choices=["surefire", "csv"], default="surefire")
    p.add_argument("--key", help="Commit of a single Surefire directory")
    p.add_argument("--aggregate", choices=["sum", "max", "mean"], default="sum")
    p.add_argument("--append", action="store_true", help="Merge into an existing output file")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=run_bench)

    p = sub.add_parser("predict", help="Run the rolling or split prediction protocol")
    p.add_argument("--vectors", type=Path, required=True)
    p.add_argument("--times", type=Path, required=True)
    p.add_argument("--model", choices=["knn", "ridge"], default="knn")
    p.add_argument("--mode", choices=["rolling", "split"], default="rolling")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--lambda", dest="l2_lambda", type=float, default=1.0)
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--standardize", action="store_true")
    p.add_argument("--features", type=Path, nargs="*", default=[], help="Retrain NR embeddings per rolling pair")
    p.add_argument("--pooling", choices=["flatten", "mean"], default="flatten")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=run_predict)

    p = sub.add_parser("report", help="Summarize prediction records")
    p.add_argument("--predictions", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--csv", type=Path, help="Flat per-pair table")
    p.add_argument("--timings", type=Path, help="Defaults to timings.json next to --out")
    p.add_argument("--mode", choices=["rolling", "split"], default="rolling")
    p.add_argument("--features", type=Path, nargs="*", default=[], help="Feature files for selection timings")
    p.add_argument("--vectors", type=Path, nargs="*", default=[], help="Vector files for SR/NR timings")
    p.set_defaults(func=run_report)

    p = sub.add_parser("run", help="Run the whole pipeline")
    p.add_argument("--config", type=Path, help="JSON or key=value configuration file")
    p.add_argument("--repo", type=Path)
    p.add_argument("--branch")
    p.add_argument("--commits", type=int)
    p.add_argument("--ext")
    p.add_argument("--policy", choices=["skip", "abort"])
    p.add_argument("--representation", choices=["sr", "nr"])
    p.add_argument("--pooling", choices=["flatten", "mean"])
    p.add_argument("--seed", type=int)
    p.add_argument("--reports", type=Path)
    p.add_argument("--format", choices=["surefire", "csv"])
    p.add_argument("--key")
    p.add_argument("--aggregate", choices=["sum", "max", "mean"])
    p.add_argument("--mode", choices=["rolling", "split"])
    p.add_argument("--model", choices=["knn", "ridge"])
    p.add_argument("--k", type=int)
    p.add_argument("--lambda", dest="l2_lambda", type=float)
    p.add_argument("--window", type=int)
    p.add_argument("--standardize", action=argparse.BooleanOptionalAction)
    p.add_argument("--train-fraction", type=float)
    p.add_argument("--out", type=Path)
    p.add_argument("--from", dest="from_stage", choices=STAGES, default="snapshot", help="Resume from this stage")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=run_run)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config.setup("DEBUG" if args.verbose else None)
    try:
        return args.func(args)
    except StageFailed as e:
        logger.error(f"{e} (exit {e.exit_code})")
        return e.exit_code
    except PaceError as e:
        logger.error(str(e))
        return e.exit_code
    except Exception:
        logger.exception("Unexpected failure")
        return 1


# === Entry Point === #
if __name__ == "__main__":
    sys.exit(main())
