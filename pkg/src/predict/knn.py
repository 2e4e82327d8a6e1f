import numpy as np

from .base import BaseRegressor


class KNNRegressor(BaseRegressor):
    """
    Uniformly weighted k-nearest-neighbours regression under Euclidean distance.

    The effective k is ``min(k, n_train)``. Equal distances are resolved in
    favour of the lower training position.
    """

    def __init__(self, k: int = 5, standardize: bool = False):
        super().__init__(standardize=standardize)
        self.k = k

    def _fit(self, X: np.ndarray, y: np.ndarray) -> None:
        self.X_ = X
        self.y_ = y
        self.k_ = min(self.k, X.shape[0])

    def neighbours(self, x: np.ndarray) -> np.ndarray:
        distances = np.sqrt(np.square(self.X_ - x).sum(axis=1))
        return np.argsort(distances, kind="stable")[: self.k_]

    def _predict(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.y_[self.neighbours(x)].mean() for x in X])

    def __repr__(self):
        return f"KNNRegressor(k={self.k})"
