"""
Forecast accuracy:
    MAE  = mean |p - o|
    RMSE = sqrt(mean (p - o)^2)
    WAPE = sum |p - o| / sum |o| * 100
"""
from dataclasses import dataclass

import numpy as np

from utils.errors import DataError


@dataclass(frozen=True)
class MetricsReport:
    mae: float
    rmse: float
    wape: float
    n: int
    space: str = 'bps'

    def to_dict(self):
        return {'mae': self.mae, 'rmse': self.rmse, 'wape': self.wape,
                'n': self.n, 'space': self.space}


def compute_metrics(pred, actual, space='bps'):
    pred = np.asarray(pred, dtype=np.float64).ravel()
    actual = np.asarray(actual, dtype=np.float64).ravel()
    if len(pred) != len(actual):
        raise DataError(f"{len(pred)} predictions for {len(actual)} actual values")
    if len(pred) == 0:
        raise DataError("cannot compute metrics over zero instances")
    if not (np.all(np.isfinite(pred)) and np.all(np.isfinite(actual))):
        raise DataError("predictions and actuals must be finite")

    abs_err = np.abs(pred - actual)
    total_actual = np.sum(np.abs(actual))
    if total_actual == 0:
        raise DataError("WAPE is undefined when every actual value is zero")
    return MetricsReport(
        mae=float(np.mean(abs_err)),
        rmse=float(np.sqrt(np.mean(abs_err ** 2))),
        wape=float(np.sum(abs_err) / total_actual * 100.0),
        n=len(pred),
        space=space,
    )
