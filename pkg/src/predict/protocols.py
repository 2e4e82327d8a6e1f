"""Training/testing protocols over a joined dataset: the rolling commit window and the random split."""

import logging
import time
from typing import Callable, Optional, Sequence

import numpy as np
from sklearn.model_selection import train_test_split
from tqdm import tqdm

from common.errors import DimensionMismatch, EmptyTrainingSet, TooFewObservations, WindowTooLarge
from metrics.regression import compute_metrics

from .base import BaseRegressor
from .factory import PredictorFactory
from .models import Dataset, Observation, PredictionRecord, PredictionTiming, PredictorSpec, SplitResult

logger = logging.getLogger(__name__)

MIN_SPLIT_OBSERVATIONS = 5

# (train_keys, test_key) -> (train feature rows, test feature row)
Featurizer = Callable[[Sequence[str], str], tuple[list[list[float]], list[float]]]


def commit_label(index: int) -> str:
    return "c_n" if index == 0 else f"c_n-{index}"


def fit(spec: PredictorSpec, train: Dataset | Sequence[Observation]) -> BaseRegressor:
    """
    Fit a fresh predictor of the given kind on the training observations.

    Args:
        spec: Predictor kind and hyperparameters
        train: Training observations

    Returns:
        The fitted predictor
    """
    observations = list(train.observations if isinstance(train, Dataset) else train)
    if not observations:
        raise EmptyTrainingSet("Cannot fit on an empty training set")
    X = [o.features for o in observations]
    y = [o.target for o in observations]
    return PredictorFactory.get_predictor(spec).fit(X, y)


def predict(fitted: BaseRegressor, features: Sequence[float]) -> float:
    """Predicted execution time in seconds for one feature vector."""
    if len(features) != fitted.n_features_in_:
        raise DimensionMismatch(f"Expected {fitted.n_features_in_} features, got {len(features)}")
    return fitted.predict_one(features)


def _record(
    train: list[Observation],
    test: Observation,
    pair: str,
    predicted: float,
    timing: PredictionTiming,
) -> PredictionRecord:
    metrics = compute_metrics([test.target], [predicted])
    return PredictionRecord(
        train_key=train[0].key,
        train_keys=[o.key for o in train],
        test_key=test.key,
        pair=pair,
        predicted=predicted,
        actual=test.target,
        metrics=metrics,
        rmmr=metrics.rmmr,
        train_files=train[0].files,
        test_files=test.files,
        timing=timing,
    )


def run_rolling(
    dataset: Dataset,
    spec: PredictorSpec,
    window: int = 1,
    featurizer: Optional[Featurizer] = None,
) -> list[PredictionRecord]:
    """
    Train on commits ``i .. i+window-1`` and predict commit ``i+window``, for every i.

    Commit 0 is the newest, so each pair predicts an older commit from its
    successors. One record per pair, in pair order.

    Args:
        dataset: Rolling dataset ordered by commit index
        spec: Predictor kind and hyperparameters, a fresh predictor is fit per pair
        window: Number of training commits per pair
        featurizer: Optional per-pair re-featurization, overriding the dataset's features;
            its time counts as training time

    Returns:
        The list of prediction records
    """
    n = len(dataset)
    if n < 2:
        raise TooFewObservations(f"Rolling prediction needs at least 2 commits, got {n}")
    if window < 1 or window >= n:
        raise WindowTooLarge(f"Window {window} must be between 1 and {n - 1} for {n} commits")

    observations = dataset.observations
    records = []
    for i in tqdm(range(n - window), desc=f"Rolling {spec.kind}", disable=n - window < 2):
        train = observations[i : i + window]
        test = observations[i + window]
        start = time.perf_counter()
        if featurizer is not None:
            train_rows, test_row = featurizer([o.key for o in train], test.key)
            train = [o.model_copy(update={"features": row}) for o, row in zip(train, train_rows)]
            test = test.model_copy(update={"features": test_row})

        fitted = fit(spec, train)
        train_seconds = time.perf_counter() - start
        start = time.perf_counter()
        predicted = predict(fitted, test.features)
        predict_seconds = time.perf_counter() - start

        labels = [commit_label(o.index) for o in train]
        train_label = labels[0] if window == 1 else f"{labels[0]}..{labels[-1]}"
        pair = f"{train_label}, {commit_label(test.index)}"
        timing = PredictionTiming(train_seconds=train_seconds, predict_seconds=predict_seconds)
        record = _record(train, test, pair, predicted, timing)
        logger.debug(f"{pair}: predicted {predicted:.6f}s, actual {test.target:.6f}s, rmmr {record.rmmr:.6f}")
        records.append(record)
    return records


def run_split(
    dataset: Dataset,
    spec: PredictorSpec,
    train_fraction: float = 0.8,
    seed: int = 42,
) -> SplitResult:
    """
    Fit once on a seeded random ``train_fraction`` of the observations and score the rest.

    Returns:
        Per-observation records plus the aggregate metrics over the test part
    """
    n = len(dataset)
    if n < MIN_SPLIT_OBSERVATIONS:
        raise TooFewObservations(f"Split prediction needs at least {MIN_SPLIT_OBSERVATIONS} observations, got {n}")
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")

    train_pos, test_pos = train_test_split(np.arange(n), train_size=train_fraction, random_state=seed, shuffle=True)
    train = [dataset.observations[i] for i in train_pos]
    test = [dataset.observations[i] for i in test_pos]
    if not train or not test:
        raise TooFewObservations(f"A {train_fraction} split of {n} observations leaves one side empty")

    start = time.perf_counter()
    fitted = fit(spec, train)
    train_seconds = time.perf_counter() - start

    records = []
    for obs in test:
        start = time.perf_counter()
        predicted = predict(fitted, obs.features)
        timing = PredictionTiming(train_seconds=train_seconds / len(test), predict_seconds=time.perf_counter() - start)
        records.append(_record(train, obs, obs.key, predicted, timing))

    aggregate = compute_metrics([r.actual for r in records], [r.predicted for r in records])
    logger.info(f"Split {len(train)}/{len(test)} with {spec.kind}: rmmr {aggregate.rmmr:.6f}")
    return SplitResult(
        records=records,
        aggregate=aggregate,
        train_keys=[o.key for o in train],
        test_keys=[o.key for o in test],
    )
