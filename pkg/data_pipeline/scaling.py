from dataclasses import dataclass

import numpy as np

from utils.errors import DataError


@dataclass(frozen=True)
class ScalerParams:
    """Min-max scaling bounds in bps"""
    min: float
    max: float

    def __post_init__(self):
        if not (np.isfinite(self.min) and np.isfinite(self.max)):
            raise DataError(f"scaler bounds must be finite, got [{self.min}, {self.max}]")
        if self.max < self.min:
            raise DataError(f"scaler max {self.max} is below min {self.min}")

    @property
    def range(self):
        return self.max - self.min

    def to_dict(self):
        return {'min': self.min, 'max': self.max}

    @classmethod
    def from_dict(cls, values):
        try:
            return cls(min=float(values['min']), max=float(values['max']))
        except (KeyError, TypeError, ValueError) as e:
            raise DataError(f"invalid scaler block {values!r}") from e


def fit_scaler(train_values):
    """Fit bounds on the training split only"""
    values = np.asarray(train_values, dtype=np.float64)
    if values.size == 0:
        raise DataError("cannot fit a scaler on an empty series")
    if not np.all(np.isfinite(values)):
        raise DataError("cannot fit a scaler on missing values",
                        suggestion="forward-fill the series first")
    return ScalerParams(min=float(values.min()), max=float(values.max()))


def transform(values, scaler):
    """v -> (v - min) / (max - min); a degenerate range maps everything to 0"""
    values = np.asarray(values, dtype=np.float64)
    if scaler.range == 0:
        return np.zeros_like(values)
    return (values - scaler.min) / scaler.range


def inverse(normalized, scaler):
    """Exact affine inverse of transform; a degenerate range returns the constant"""
    normalized = np.asarray(normalized, dtype=np.float64)
    if scaler.range == 0:
        return np.full_like(normalized, scaler.min)
    return normalized * scaler.range + scaler.min
