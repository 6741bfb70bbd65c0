"""
Timestamped bps series with NaN as the missing marker, plus CSV I/O,
forward filling and chronological splitting.
"""
import hashlib
import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from utils.errors import DataError

logger = logging.getLogger(__name__)

SERIES_COLUMNS = ['timestamp', 'bps']


@dataclass
class TimeSeries:
    """UTC epoch-second timestamps and bps values; NaN marks a missing point"""
    timestamps: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.timestamps = np.asarray(self.timestamps, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.timestamps.ndim != 1 or self.values.ndim != 1:
            raise DataError("timestamps and values must be one-dimensional")
        if len(self.timestamps) != len(self.values):
            raise DataError(f"{len(self.timestamps)} timestamps but {len(self.values)} values")
        if len(self.timestamps) > 1 and np.any(np.diff(self.timestamps) <= 0):
            raise DataError("timestamps must be strictly increasing")

    def __len__(self):
        return len(self.values)

    @property
    def missing(self):
        return np.isnan(self.values)

    def missing_count(self):
        return int(self.missing.sum())

    def slice(self, start, stop=None):
        return TimeSeries(self.timestamps[start:stop], self.values[start:stop])

    def to_frame(self):
        return pd.DataFrame({'timestamp': self.timestamps, 'bps': self.values})

    def digest(self):
        """SHA-256 over the canonical CSV bytes"""
        return hashlib.sha256(series_to_csv_text(self).encode('utf-8')).hexdigest()


def series_to_csv_text(series):
    return series.to_frame().to_csv(index=False, na_rep='', lineterminator='\n')


def write_series_csv(series, path):
    """Write `timestamp,bps` with a header; missing values as empty fields"""
    with open(path, 'w', encoding='utf-8', newline='') as handle:
        handle.write(series_to_csv_text(series))
    logger.info("wrote %d points to %s", len(series), path)


def read_series_csv(path):
    try:
        frame = pd.read_csv(path, dtype={'timestamp': 'int64', 'bps': 'float64'})
    except FileNotFoundError as e:
        raise DataError(f"series file {path} does not exist") from e
    except (ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataError(f"cannot parse series file {path}: {e}") from e
    if list(frame.columns) != SERIES_COLUMNS:
        raise DataError(f"series file {path} must have header {','.join(SERIES_COLUMNS)}, "
                        f"got {','.join(map(str, frame.columns))}")
    return TimeSeries(frame['timestamp'].to_numpy(), frame['bps'].to_numpy())


def forward_fill(series):
    """
    Replace each missing value with the last observed one. Leading gaps take
    the first observation.
    """
    if len(series) == 0 or series.missing.all():
        raise DataError("cannot forward-fill a series with no observed values")
    filled = pd.Series(series.values).ffill().bfill().to_numpy()
    return TimeSeries(series.timestamps.copy(), filled)


def regularize_series(series, interval_seconds):
    """
    Lay the series on a grid of `interval_seconds` slots anchored at its first
    timestamp. Jittered timestamps snap to the nearest slot (ties round up),
    a later point wins when two share a slot, and empty slots become missing.
    """
    if len(series) < 2:
        return series
    start = series.timestamps[0]
    offsets = series.timestamps - start
    slots = (offsets + interval_seconds // 2) // interval_seconds
    snapped = int(np.count_nonzero(offsets % interval_seconds))
    if snapped:
        logger.warning("snapped %d off-grid timestamps to the %d s grid", snapped, interval_seconds)
    # slots never decrease, so the last point of a run of equal slots wins
    last = np.append(slots[1:] != slots[:-1], True)
    collisions = int(np.count_nonzero(~last))
    if collisions:
        logger.warning("%d points shared a grid slot with a later point and were dropped", collisions)

    grid = start + np.arange(slots[-1] + 1, dtype=np.int64) * interval_seconds
    values = np.full(len(grid), np.nan)
    values[slots[last]] = series.values[last]
    inserted = len(grid) - int(np.count_nonzero(last))
    if inserted:
        logger.warning("inserted %d missing slots into gaps of the series", inserted)
    return TimeSeries(grid, values)


def chrono_split(series, train_fraction=0.8, window_length=None):
    """
    Prefix/suffix split at floor(n * fraction), never shuffled.
    With window_length given, each side must hold more than L points.
    """
    if not 0.0 < train_fraction < 1.0:
        raise DataError(f"train_fraction must lie strictly between 0 and 1, got {train_fraction}")
    cut = math.floor(len(series) * train_fraction)
    train, test = series.slice(0, cut), series.slice(cut)
    minimum = 0 if window_length is None else window_length
    if len(train) <= minimum or len(test) <= minimum:
        raise DataError(f"split of {len(series)} points at {train_fraction} leaves "
                        f"{len(train)} train / {len(test)} test points, need more than {minimum} each")
    return train, test
