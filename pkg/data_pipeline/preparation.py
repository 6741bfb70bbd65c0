import logging
from dataclasses import dataclass

import numpy as np

from .scaling import ScalerParams, fit_scaler, transform
from .series import TimeSeries, chrono_split, forward_fill
from .windowing import WindowedDataset, make_windows

logger = logging.getLogger(__name__)


@dataclass
class PreparedData:
    train: WindowedDataset
    test: WindowedDataset
    scaler: ScalerParams
    train_series: TimeSeries
    test_series: TimeSeries


def prepare_datasets(series, window_length, train_fraction=0.8, test_context=False):
    """
    fill -> chronological split -> scaler fitted on train -> transform -> windows.

    Test targets are never clipped to [0, 1]. With test_context the last L train
    values prefix the test windows, so every test point becomes a target;
    otherwise the test split yields len(test) - L pairs.
    """
    filled = forward_fill(series)
    train_series, test_series = chrono_split(filled, train_fraction, window_length)
    scaler = fit_scaler(train_series.values)

    train = make_windows(transform(train_series.values, scaler), window_length,
                         train_series.timestamps)
    if test_context:
        context = train_series.slice(len(train_series) - window_length)
        values = np.concatenate([context.values, test_series.values])
        stamps = np.concatenate([context.timestamps, test_series.timestamps])
    else:
        values, stamps = test_series.values, test_series.timestamps
    test = make_windows(transform(values, scaler), window_length, stamps)

    logger.info("prepared %d train / %d test windows (L=%d, scaler [%.6g, %.6g])",
                len(train), len(test), window_length, scaler.min, scaler.max)
    return PreparedData(train, test, scaler, train_series, test_series)
