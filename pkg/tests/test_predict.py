import random

import numpy as np
import pytest
from pydantic import ValidationError

from common.errors import (
    DimensionMismatch,
    EmptyTrainingSet,
    PredictorNotFitted,
    SingularSystem,
    TooFewObservations,
    WindowTooLarge,
)
from predict.factory import PredictorFactory
from predict.knn import KNNRegressor
from predict.models import Dataset, Observation, PredictorSpec
from predict.protocols import commit_label, fit, predict, run_rolling, run_split
from predict.ridge import RidgeRegressor


def rolling(targets: list[float], dim: int = 2) -> Dataset:
    """Commit 0 first; features grow with the index so no two vectors coincide."""
    return Dataset(
        mode="rolling",
        observations=[
            Observation(key=f"{i:x}" * 40, features=[float(i + j) for j in range(dim)], target=t, index=i, files=i + 1)
            for i, t in enumerate(targets)
        ],
    )


def split(xs: list[float], ys: list[float]) -> Dataset:
    observations = [Observation(key=f"src/F{i}.java", features=[x], target=y) for i, (x, y) in enumerate(zip(xs, ys))]
    return Dataset(mode="split", observations=observations)


class TestDataset:
    def test_mixed_dimensions_rejected(self):
        with pytest.raises(ValidationError):
            Dataset(
                mode="split",
                observations=[
                    Observation(key="a", features=[1.0], target=1.0),
                    Observation(key="b", features=[1.0, 2.0], target=1.0),
                ],
            )

    def test_rolling_indices_must_be_contiguous(self):
        with pytest.raises(ValidationError):
            Dataset(
                mode="rolling",
                observations=[
                    Observation(key="a", features=[1.0], target=1.0, index=0),
                    Observation(key="b", features=[1.0], target=1.0, index=2),
                ],
            )

    def test_non_positive_target_rejected(self):
        with pytest.raises(ValidationError):
            Observation(key="a", features=[1.0], target=0.0)

    def test_feature_dim(self):
        assert rolling([1.0, 2.0], dim=42).feature_dim == 42


class TestKNN:
    def test_nearest_neighbour(self):
        model = KNNRegressor(k=1).fit([[0, 0], [1, 1]], [1.0, 3.0])
        assert model.predict_one([0.1, 0]) == 1.0

    def test_mean_of_both_targets(self):
        model = KNNRegressor(k=2).fit([[0, 0], [1, 1]], [1.0, 3.0])
        for query in ([0.1, 0], [5, 5], [-3, 2]):
            assert model.predict_one(query) == 2.0

    def test_effective_k_clamped(self):
        model = KNNRegressor(k=5).fit([[1.0, 2.0]], [4.25])
        assert model.k_ == 1
        assert model.predict_one([100.0, -100.0]) == 4.25

    def test_exact_match_returns_target(self):
        X = [[0.0, 1.0], [2.0, 3.0], [4.0, 5.0]]
        model = KNNRegressor(k=1).fit(X, [1.5, 2.5, 3.5])
        assert model.predict_one([2.0, 3.0]) == 2.5

    def test_ties_go_to_lower_index(self):
        model = KNNRegressor(k=1).fit([[0.0], [2.0]], [1.0, 3.0])
        assert model.predict_one([1.0]) == 1.0

    def test_permutation_without_ties(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(12, 3))
        y = rng.uniform(1, 5, size=12)
        query = rng.normal(size=3)
        order = rng.permutation(12)
        first = KNNRegressor(k=3).fit(X, y).predict_one(query)
        second = KNNRegressor(k=3).fit(X[order], y[order]).predict_one(query)
        assert first == pytest.approx(second, abs=1e-12)

    def test_standardize(self):
        # raw distances are dominated by the second feature
        X = [[0.0, 0.0], [1.0, 100.0]]
        raw = KNNRegressor(k=1).fit(X, [1.0, 2.0])
        scaled = KNNRegressor(k=1, standardize=True).fit(X, [1.0, 2.0])
        assert raw.predict_one([0.9, 20.0]) == 1.0
        assert scaled.predict_one([0.9, 20.0]) == 2.0

    def test_predict_before_fit(self):
        with pytest.raises(PredictorNotFitted):
            KNNRegressor().predict([[1.0]])


class TestRidge:
    def test_hand_solved_one_feature(self):
        # centred: x = -1/2, 1/2 and y = -1, 1, so beta = (1/2) / (1/2 + 1)
        model = RidgeRegressor(l2_lambda=1.0).fit([[0.0], [1.0]], [1.0, 3.0])
        assert model.coef_[0] == pytest.approx(2 / 3, abs=1e-12)
        assert model.intercept_ == pytest.approx(5 / 3, abs=1e-12)
        assert model.predict_one([1.0]) == pytest.approx(7 / 3, abs=1e-12)

    def test_large_penalty_tends_to_mean(self):
        rng = np.random.default_rng(1)
        X = rng.uniform(0, 10, size=(6, 4))
        y = rng.uniform(1, 5, size=6)
        model = RidgeRegressor(l2_lambda=1e12).fit(X, y)
        assert model.predict_one(rng.uniform(0, 10, size=4)) == pytest.approx(y.mean(), abs=1e-6)

    def test_zero_penalty_rank_deficient(self):
        with pytest.raises(SingularSystem):
            RidgeRegressor(l2_lambda=0).fit([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]], [1.0, 2.0, 3.0])

    def test_zero_penalty_exact_recovery(self):
        X = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, 1.0]]
        y = [1.0 + 2 * a + 3 * b for a, b in X]
        model = RidgeRegressor(l2_lambda=0).fit(X, y)
        assert model.coef_ == pytest.approx([2.0, 3.0], abs=1e-9)
        assert model.intercept_ == pytest.approx(1.0, abs=1e-9)

    def test_dual_matches_primal(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(3, 8))
        y = rng.uniform(1, 5, size=3)
        dual = RidgeRegressor(l2_lambda=0.5).fit(X, y)
        Xc = X - X.mean(axis=0)
        primal = np.linalg.solve(Xc.T @ Xc + 0.5 * np.eye(8), Xc.T @ (y - y.mean()))
        assert dual.coef_ == pytest.approx(primal, abs=1e-9)

    def test_predictions_clipped_to_floor(self):
        model = RidgeRegressor(l2_lambda=0, floor=1e-6).fit([[0.0], [1.0]], [1.0, 2.0])
        assert model.predict_one([-50.0]) == 1e-6

    def test_permutation_invariance(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(10, 3))
        y = rng.uniform(1, 5, size=10)
        query = rng.normal(size=3)
        order = rng.permutation(10)
        first = RidgeRegressor(l2_lambda=0.3).fit(X, y).predict_one(query)
        second = RidgeRegressor(l2_lambda=0.3).fit(X[order], y[order]).predict_one(query)
        assert first == pytest.approx(second, abs=1e-9)


class TestFactory:
    def test_knn(self):
        predictor = PredictorFactory.get_predictor(PredictorSpec(kind="knn", k=3))
        assert isinstance(predictor, KNNRegressor)
        assert predictor.k == 3

    def test_ridge(self):
        predictor = PredictorFactory.get_predictor(PredictorSpec(kind="ridge", l2_lambda=0.25))
        assert isinstance(predictor, RidgeRegressor)
        assert predictor.l2_lambda == 0.25

    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            PredictorSpec(kind="svr")


class TestFitPredict:
    def test_empty_training_set(self):
        with pytest.raises(EmptyTrainingSet):
            fit(PredictorSpec(), [])

    def test_dimension_mismatch(self):
        fitted = fit(PredictorSpec(), rolling([1.0, 2.0], dim=3))
        with pytest.raises(DimensionMismatch):
            predict(fitted, [1.0, 2.0])

    @pytest.mark.parametrize("kind", ["knn", "ridge"])
    def test_single_observation_is_constant(self, kind):
        fitted = fit(PredictorSpec(kind=kind), rolling([2.5], dim=4))
        for query in ([0.0, 0.0, 0.0, 0.0], [9.0, -1.0, 3.0, 2.0]):
            assert predict(fitted, query) == 2.5


class TestRolling:
    def test_five_commits_four_pairs(self):
        records = run_rolling(rolling([3.0, 2.78, 2.5, 2.9, 3.1]), PredictorSpec())
        assert [r.pair for r in records] == ["c_n, c_n-1", "c_n-1, c_n-2", "c_n-2, c_n-3", "c_n-3, c_n-4"]
        assert [r.predicted for r in records] == [3.0, 2.78, 2.5, 2.9]
        assert [r.actual for r in records] == [2.78, 2.5, 2.9, 3.1]

    def test_two_commits(self):
        (record,) = run_rolling(rolling([3.0, 2.78]), PredictorSpec())
        assert record.predicted == 3.0
        assert record.metrics.rmse == pytest.approx(0.22, abs=1e-12)
        assert record.metrics.mae == pytest.approx(0.22, abs=1e-12)
        assert record.train_files == 1
        assert record.test_files == 2

    @pytest.mark.parametrize("kind", ["knn", "ridge"])
    def test_constant_prediction_metrics(self, kind):
        rng = random.Random(5)
        targets = [rng.uniform(0.5, 10) for _ in range(6)]
        for record in run_rolling(rolling(targets, dim=42), PredictorSpec(kind=kind)):
            delta = record.actual - record.predicted
            assert record.metrics.rmse == pytest.approx(abs(delta), abs=1e-12)
            assert record.metrics.mae == pytest.approx(abs(delta), abs=1e-12)
            assert record.metrics.mse == pytest.approx(delta**2, abs=1e-12)
            assert record.metrics.rmsle == pytest.approx(abs(np.log(record.actual / record.predicted)), abs=1e-12)

    def test_rmmr_is_mean_of_metrics(self):
        for record in run_rolling(rolling([1.0, 2.0, 4.0]), PredictorSpec()):
            m = record.metrics
            assert record.rmmr == pytest.approx((m.rmse + m.mse + m.mae + m.rmsle) / 4, abs=1e-15)

    def test_window_two(self):
        records = run_rolling(rolling([1.0, 2.0, 3.0, 4.0, 5.0]), PredictorSpec(kind="knn"), window=2)
        assert len(records) == 3
        assert records[0].pair == "c_n..c_n-1, c_n-2"
        assert records[0].predicted == 1.5
        assert len(records[0].train_keys) == 2

    def test_window_too_large(self):
        with pytest.raises(WindowTooLarge):
            run_rolling(rolling([1.0, 2.0, 3.0]), PredictorSpec(), window=3)

    def test_too_few_commits(self):
        with pytest.raises(TooFewObservations):
            run_rolling(rolling([1.0]), PredictorSpec())

    def test_featurizer_overrides_features(self):
        calls = []

        def featurizer(train_keys, test_key):
            calls.append((list(train_keys), test_key))
            return [[0.0, 0.0, 0.0]] * len(train_keys), [1.0, 1.0, 1.0]

        dataset = rolling([2.0, 3.0, 4.0])
        records = run_rolling(dataset, PredictorSpec(), featurizer=featurizer)
        assert calls == [([dataset.keys[0]], dataset.keys[1]), ([dataset.keys[1]], dataset.keys[2])]
        assert [r.predicted for r in records] == [2.0, 3.0]

    def test_timings_non_negative(self):
        for record in run_rolling(rolling([1.0, 2.0, 3.0]), PredictorSpec()):
            assert record.timing.train_seconds >= 0
            assert record.timing.predict_seconds >= 0

    def test_commit_labels(self):
        assert commit_label(0) == "c_n"
        assert commit_label(3) == "c_n-3"


class TestSplit:
    def test_eight_two(self):
        result = run_split(split(list(range(10)), [1.0 + x for x in range(10)]), PredictorSpec(), seed=42)
        assert len(result.train_keys) == 8
        assert len(result.test_keys) == 2
        assert len(result.records) == 2
        assert set(result.train_keys).isdisjoint(result.test_keys)

    def test_seeded_split_is_deterministic(self):
        dataset = split(list(range(10)), [1.0 + x for x in range(10)])
        first = run_split(dataset, PredictorSpec(), seed=3)
        second = run_split(dataset, PredictorSpec(), seed=3)
        assert first.test_keys == second.test_keys
        assert [r.predicted for r in first.records] == [r.predicted for r in second.records]

    def test_identical_targets_score_zero(self):
        result = run_split(split([float(x) for x in range(10)], [1.0] * 10), PredictorSpec())
        assert result.aggregate.as_dict() == {"rmse": 0.0, "mse": 0.0, "mae": 0.0, "rmsle": 0.0, "rmmr": 0.0}

    def test_linear_data_recovered_by_ridge(self):
        xs = [float(x) for x in range(1, 11)]
        result = run_split(split(xs, [2 * x for x in xs]), PredictorSpec(kind="ridge", l2_lambda=0.0))
        assert result.aggregate.mse < 1e-9

    def test_records_keyed_by_test_file(self):
        result = run_split(split(list(range(6)), [1.0] * 6), PredictorSpec(), train_fraction=0.5)
        assert [r.pair for r in result.records] == result.test_keys

    def test_too_few_observations(self):
        with pytest.raises(TooFewObservations):
            run_split(split([1.0, 2.0, 3.0, 4.0], [1.0] * 4), PredictorSpec())
