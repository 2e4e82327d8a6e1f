import math
from typing import Sequence

import numpy as np
from sklearn.metrics import mean_absolute_error, mean_squared_error

from common.errors import EmptyInput, LengthMismatch, NonPositiveValue

from .models import MetricSet


def compute_metrics(actual: Sequence[float], predicted: Sequence[float]) -> MetricSet:
    """
    RMSE, MSE, MAE and RMSLE between observed and predicted execution times.

    MSE is the mean (not the sum) of squared errors, so ``rmse ** 2 == mse``.
    RMSLE uses the natural log without the +1 offset, hence both sides must
    be strictly positive.
    """
    y = np.asarray(actual, dtype=float)
    y_hat = np.asarray(predicted, dtype=float)
    if y.shape != y_hat.shape:
        raise LengthMismatch(f"{y.size} actual values but {y_hat.size} predictions")
    if y.size == 0:
        raise EmptyInput("No values to score")
    if (y <= 0).any() or (y_hat <= 0).any():
        raise NonPositiveValue("RMSLE needs strictly positive times")

    mse = float(mean_squared_error(y, y_hat))
    return MetricSet(
        rmse=math.sqrt(mse),
        mse=mse,
        mae=float(mean_absolute_error(y, y_hat)),
        rmsle=math.sqrt(float(mean_squared_error(np.log(y), np.log(y_hat)))),
    )
