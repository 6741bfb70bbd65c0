"""Actual vs. predicted CSV over a test span, the plotting interface."""
import logging

import pandas as pd

from data_pipeline.scaling import inverse, transform
from data_pipeline.series import forward_fill
from data_pipeline.windowing import make_windows
from training.trainer import predict_dataset
from utils.errors import DataError

logger = logging.getLogger(__name__)

PREDICTION_COLUMNS = ['timestamp', 'actual_bps', 'predicted_bps']


def prediction_frame(model, series, scaler):
    """
    One row per target of the series: timestamp, the observed value and the
    eval-mode forecast from the L values before it, both in bps.
    """
    filled = forward_fill(series)
    dataset = make_windows(transform(filled.values, scaler), model.window_length,
                           filled.timestamps)
    predicted = inverse(predict_dataset(model, dataset).ravel(), scaler)
    return pd.DataFrame({
        'timestamp': dataset.target_timestamps,
        'actual_bps': filled.values[model.window_length:],
        'predicted_bps': predicted,
    }, columns=PREDICTION_COLUMNS)


def prediction_csv_text(model, series, scaler):
    return prediction_frame(model, series, scaler).to_csv(index=False, lineterminator='\n')


def export_predictions(model, series, scaler, path):
    """Write `timestamp,actual_bps,predicted_bps`; returns the row count (len(series) - L)"""
    frame = prediction_frame(model, series, scaler)
    try:
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            handle.write(frame.to_csv(index=False, lineterminator='\n'))
    except OSError as e:
        raise DataError(f"cannot write predictions to {path}: {e}") from e
    logger.info("wrote %d predictions to %s", len(frame), path)
    return len(frame)
