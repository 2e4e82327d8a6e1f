from pathlib import Path

CONFIG_FILE = "config.json"
LOCK_FILE = "pace.lock"
SNAPSHOTS_DIR = "snapshots"
MANIFESTS_DIR = "manifests"
FEATURES_DIR = "features"
FILE_FEATURES_FILE = "files.json"
VECTORS_FILE = "vectors.json"
TIMES_FILE = "times.csv"
PREDICTIONS_FILE = "predictions.json"
REPORT_FILE = "report.json"
REPORT_CSV_FILE = "report.csv"
TIMINGS_FILE = "timings.json"

TAXONOMY_FILE = Path(__file__).resolve().parent.parent / "cstyle" / "taxonomy.json"


def snapshot_dirname(index: int, commit_hash: str) -> str:
    return f"c_{index}_{commit_hash[:7]}"
