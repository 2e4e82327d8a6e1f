from .base import BaseRegressor
from .knn import KNNRegressor
from .models import PredictorSpec
from .ridge import RidgeRegressor


class PredictorFactory:
    _map = {
        "knn": lambda spec: KNNRegressor(k=spec.k, standardize=spec.standardize),
        "ridge": lambda spec: RidgeRegressor(l2_lambda=spec.l2_lambda, floor=spec.floor, standardize=spec.standardize),
    }

    @staticmethod
    def get_predictor(spec: PredictorSpec) -> BaseRegressor:
        builder = PredictorFactory._map.get(spec.kind)
        if not builder:
            raise ValueError(f"No predictor for kind: {spec.kind}")
        return builder(spec)
