import numpy as np

from utils.errors import ShapeError


def mse_loss(pred, target):
    """Mean squared error and its gradient 2(pred - target)/batch w.r.t. pred"""
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ShapeError(f"prediction shape {pred.shape} does not match target shape {target.shape}")
    if pred.size == 0:
        raise ShapeError("cannot compute a loss over an empty batch")
    diff = pred - target
    return float(np.mean(diff ** 2)), 2.0 * diff / diff.size
