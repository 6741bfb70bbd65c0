"""
Dense float64 tensors and the primitive operations the layers are built on.

A Tensor is a C-contiguous (row-major) numpy array of float64. Operations here
never mutate their inputs.
"""
import numpy as np
from numpy.typing import NDArray

from utils.errors import ConfigError, NumericError, ShapeError

Tensor = NDArray[np.float64]


def as_tensor(values, allow_missing=False):
    """Convert values to a row-major float64 tensor, rejecting NaN/Inf unless allowed"""
    tensor = np.ascontiguousarray(values, dtype=np.float64)
    if not allow_missing and not np.all(np.isfinite(tensor)):
        raise NumericError("tensor contains non-finite values",
                           suggestion="forward-fill missing values before this stage")
    return tensor


def matmul(a, b):
    """Matrix product of two rank-2 tensors"""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}",
                         left=a.shape, right=b.shape)
    return a @ b


def softmax_last_axis(x):
    """Softmax over the last axis, shifted by the slice maximum for stability"""
    x = np.asarray(x, dtype=np.float64)
    shifted = x - np.max(x, axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=-1, keepdims=True)


def relu(x):
    return np.maximum(x, 0.0)


def sigmoid(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    positive = x >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-x[positive]))
    exp = np.exp(x[~positive])
    out[~positive] = exp / (1.0 + exp)
    return out


def tanh(x):
    return np.tanh(x)


ACTIVATIONS = {
    'relu': relu,
    'sigmoid': sigmoid,
    'tanh': tanh,
}


def elementwise(x, fn):
    """Apply one of the named activations (relu, sigmoid, tanh)"""
    try:
        activation = ACTIVATIONS[fn]
    except KeyError:
        raise ConfigError(f"unknown activation '{fn}'",
                          suggestion=f"choose one of {sorted(ACTIVATIONS)}") from None
    return activation(np.asarray(x, dtype=np.float64))


def reduce_mean(x, axis):
    """Arithmetic mean over one axis; the axis is removed"""
    x = np.asarray(x, dtype=np.float64)
    if not 0 <= axis < x.ndim:
        raise ShapeError(f"axis {axis} out of range for rank-{x.ndim} tensor", shape=x.shape)
    return np.mean(x, axis=axis)
