from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from utils.errors import DataError


@dataclass
class WindowedDataset:
    """
    Supervised pairs from a series x: inputs[i] = x[i:i+L], targets[i] = x[i+L].
    inputs is [N, L, 1], targets is [N, 1] and N = len(x) - L.
    """
    window_length: int
    inputs: np.ndarray
    targets: np.ndarray
    target_timestamps: np.ndarray

    def __len__(self):
        return len(self.targets)

    def batches(self, batch_size, order=None):
        """Yield (inputs, targets) mini-batches in the given index order"""
        if order is None:
            order = np.arange(len(self))
        for start in range(0, len(order), batch_size):
            index = order[start:start + batch_size]
            yield self.inputs[index], self.targets[index]


def make_windows(values, window_length, timestamps=None):
    """Every length-L window of the series paired with the value that follows it, in series order"""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise DataError(f"values must be one-dimensional, got shape {values.shape}")
    if window_length < 1:
        raise DataError(f"window length must be at least 1, got {window_length}")
    if len(values) <= window_length:
        raise DataError(f"a series of {len(values)} points is too short for L={window_length}",
                        suggestion="use a longer series or a shorter window")
    if timestamps is None:
        timestamps = np.arange(len(values), dtype=np.int64)
    timestamps = np.asarray(timestamps, dtype=np.int64)

    inputs = sliding_window_view(values[:-1], window_length)
    return WindowedDataset(
        window_length=window_length,
        inputs=np.ascontiguousarray(inputs)[:, :, np.newaxis],
        targets=values[window_length:, np.newaxis].copy(),
        target_timestamps=timestamps[window_length:].copy(),
    )
