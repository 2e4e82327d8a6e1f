import logging

import numpy as np

from common.errors import SingularSystem

from .base import BaseRegressor

logger = logging.getLogger(__name__)


class RidgeRegressor(BaseRegressor):
    """
    L2-penalised least squares with an unpenalised intercept.

    Features and targets are centred, then ``(Xc'Xc + lambda I) beta = Xc'yc``
    is solved; with fewer observations than features the equivalent dual
    system ``(XcXc' + lambda I) a = yc``, ``beta = Xc'a`` is used instead.
    Predictions are clipped to ``floor`` so log-based metrics stay defined.
    """

    def __init__(self, l2_lambda: float = 1.0, floor: float = 1e-6, standardize: bool = False):
        super().__init__(standardize=standardize)
        self.l2_lambda = l2_lambda
        self.floor = floor

    def _fit(self, X: np.ndarray, y: np.ndarray) -> None:
        n, d = X.shape
        self.x_mean_ = X.mean(axis=0)
        y_mean = y.mean()
        Xc = X - self.x_mean_
        yc = y - y_mean

        if self.l2_lambda == 0:
            if np.linalg.matrix_rank(Xc) < d:
                raise SingularSystem(f"Rank-deficient design ({n} observations, {d} features), use lambda > 0")
            self.coef_ = np.linalg.solve(Xc.T @ Xc, Xc.T @ yc)
        elif n < d:
            dual = np.linalg.solve(Xc @ Xc.T + self.l2_lambda * np.eye(n), yc)
            self.coef_ = Xc.T @ dual
        else:
            self.coef_ = np.linalg.solve(Xc.T @ Xc + self.l2_lambda * np.eye(d), Xc.T @ yc)
        self.intercept_ = float(y_mean - self.x_mean_ @ self.coef_)

    def _predict(self, X: np.ndarray) -> np.ndarray:
        raw = X @ self.coef_ + self.intercept_
        clipped = np.maximum(raw, self.floor)
        if (raw < self.floor).any():
            logger.debug(f"Clipped {(raw < self.floor).sum()} predictions to {self.floor}")
        return clipped

    def __repr__(self):
        return f"RidgeRegressor(l2_lambda={self.l2_lambda})"
