"""Fast Gradient Sign Method perturbations of the input windows."""
import logging

import numpy as np

from data_pipeline.scaling import inverse
from interface.metrics import compute_metrics
from training.losses import mse_loss
from utils.errors import NumericError

logger = logging.getLogger(__name__)


def input_gradient(model, windows, targets):
    """Eval-mode MSE and its gradient w.r.t. the input windows"""
    windows = model.check_windows(windows)
    pred, ctx = model.forward(windows, training=False)
    loss, grad_pred = mse_loss(pred, targets)
    grad_input, _ = model.backward(ctx, grad_pred)
    return loss, grad_input


def fgsm_perturb(model, windows, targets, epsilon):
    """x' = x + epsilon * sign(dMSE/dx); zero-gradient coordinates stay put"""
    if epsilon < 0:
        raise NumericError(f"epsilon must be non-negative, got {epsilon}")
    windows = model.check_windows(windows)
    _, grad_input = input_gradient(model, windows, targets)
    return windows + epsilon * np.sign(grad_input)


def fgsm_robustness(model, dataset, scaler, epsilons, batch_size=256):
    """
    Metrics on FGSM-perturbed windows for each epsilon (normalized units).
    Returns a list of (epsilon, bps MetricsReport) in the given order.
    """
    actual = inverse(dataset.targets.ravel(), scaler)
    results = []
    for epsilon in epsilons:
        chunks = []
        for inputs, targets in dataset.batches(batch_size):
            perturbed = fgsm_perturb(model, inputs, targets, epsilon)
            chunks.append(model.predict(perturbed))
        pred = inverse(np.concatenate(chunks).ravel(), scaler)
        report = compute_metrics(pred, actual)
        logger.info("fgsm epsilon=%g: MAE %.6g RMSE %.6g WAPE %.4f",
                    epsilon, report.mae, report.rmse, report.wape)
        results.append((epsilon, report))
    return results
