import abc

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.preprocessing import StandardScaler

from common.errors import DimensionMismatch, EmptyTrainingSet, PredictorNotFitted


class BaseRegressor(BaseEstimator, RegressorMixin, metaclass=abc.ABCMeta):
    """
    Common fit/predict plumbing: input checks, optional z-scoring, fitted state.

    Subclasses implement ``_fit`` and ``_predict`` on validated float arrays.
    """

    def __init__(self, standardize: bool = False):
        self.standardize = standardize

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        if X.ndim != 2 or X.shape[0] == 0:
            raise EmptyTrainingSet("Cannot fit on an empty training set")
        if y.shape != (X.shape[0],):
            raise DimensionMismatch(f"{X.shape[0]} observations but {y.size} targets")
        self.scaler_ = StandardScaler().fit(X) if self.standardize else None
        self.n_features_in_ = X.shape[1]
        self._fit(self._transform(X), y)
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "n_features_in_"):
            raise PredictorNotFitted(f"{type(self).__name__} is not fitted")
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.n_features_in_:
            raise DimensionMismatch(f"Expected {self.n_features_in_} features, got {X.shape[1]}")
        return self._predict(self._transform(X))

    def predict_one(self, features) -> float:
        return float(self.predict(features)[0])

    def _transform(self, X: np.ndarray) -> np.ndarray:
        return self.scaler_.transform(X) if self.scaler_ is not None else X

    @abc.abstractmethod
    def _fit(self, X: np.ndarray, y: np.ndarray) -> None:
        pass

    @abc.abstractmethod
    def _predict(self, X: np.ndarray) -> np.ndarray:
        pass
