"""Error hierarchy shared by every pipeline stage.

Each stage has one base class whose ``exit_code`` is the stable status the
CLI returns when that stage fails.
"""

from typing import Optional


class PaceError(Exception):
    exit_code = 1


class ConfigError(PaceError, ValueError):
    exit_code = 2


class EmptyTrainingSet(PaceError, ValueError):
    """Raised by both the embedding trainer and the regressors."""


# === Snapshot === #
class SnapshotError(PaceError):
    exit_code = 10


class NotARepository(SnapshotError):
    pass


class EmptyHistory(SnapshotError):
    pass


class UnknownBranch(SnapshotError):
    pass


class CheckoutFailed(SnapshotError):
    def __init__(self, message: str, returncode: int):
        super().__init__(message)
        self.returncode = returncode


class DirtyWorkdir(SnapshotError):
    pass


class InvalidArgument(SnapshotError, ValueError):
    pass


# === Extraction === #
class ExtractionError(PaceError):
    exit_code = 20


class EmptyCorpus(ExtractionError):
    pass


class UnparsableCorpus(ExtractionError):
    def __init__(self, message: str, paths: list[str]):
        super().__init__(message)
        self.paths = paths


# === Representation === #
class RepresentationError(PaceError):
    exit_code = 30


class InvalidCorpus(RepresentationError, ValueError):
    pass


class CountExceedsCorpus(RepresentationError, ValueError):
    pass


class OutOfVocabularyToken(RepresentationError, KeyError):
    def __init__(self, token: str):
        super().__init__(token)
        self.token = token

    def __str__(self) -> str:
        return f"Token not in embedding vocabulary: {self.token}"


# === Benchmarks === #
class BenchmarkError(PaceError):
    exit_code = 40


class NoReportsFound(BenchmarkError):
    pass


class MalformedReport(BenchmarkError):
    def __init__(self, message: str, path: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class MalformedRow(BenchmarkError):
    def __init__(self, message: str, row: int):
        super().__init__(f"row {row}: {message}")
        self.row = row


class NonPositiveTime(MalformedRow):
    pass


class MissingTarget(BenchmarkError, KeyError):
    def __init__(self, key: str):
        super().__init__(key)
        self.key = key

    def __str__(self) -> str:
        return f"No microbenchmark for key: {self.key}"


class DuplicateTarget(BenchmarkError):
    def __init__(self, key: str):
        super().__init__(f"Duplicate microbenchmark for key: {key}")
        self.key = key


# === Prediction === #
class PredictionError(PaceError):
    exit_code = 50


class PredictorNotFitted(PredictionError):
    pass


class SingularSystem(PredictionError):
    pass


class DimensionMismatch(PredictionError, ValueError):
    pass


class WindowTooLarge(PredictionError, ValueError):
    pass


class TooFewObservations(PredictionError, ValueError):
    pass


# === Metrics / report === #
class ReportError(PaceError):
    exit_code = 60


class LengthMismatch(ReportError, ValueError):
    pass


class NonPositiveValue(ReportError, ValueError):
    pass


class EmptyInput(ReportError, ValueError):
    pass


class TooFewRecords(ReportError, ValueError):
    pass


class StageFailed(PaceError):
    """Wraps the error that aborted a pipeline stage."""

    def __init__(self, stage: str, exit_code: int, cause: Optional[BaseException] = None):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.exit_code = exit_code
        self.cause = cause
