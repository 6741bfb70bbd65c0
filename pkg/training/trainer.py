"""Deterministic mini-batch training loop and held-out evaluation."""
import logging
from dataclasses import dataclass, field
from io import StringIO

import numpy as np

from data_pipeline.scaling import inverse
from interface.metrics import compute_metrics
from utils.errors import DataError, ShapeError
from .losses import mse_loss
from .optimizer import AdamState, adam_step

logger = logging.getLogger(__name__)

EVAL_BATCH_SIZE = 256


@dataclass
class TrainingHistory:
    """Per-epoch mean training loss (and validation loss when monitored)"""
    train_loss: list = field(default_factory=list)
    val_loss: list = field(default_factory=list)
    stopped_early: bool = False

    def __len__(self):
        return len(self.train_loss)

    def to_csv(self):
        out = StringIO()
        if self.val_loss:
            out.write("epoch,mean_train_loss,val_loss\n")
            for epoch, (train, val) in enumerate(zip(self.train_loss, self.val_loss), 1):
                out.write(f"{epoch},{train!r},{val!r}\n")
        else:
            out.write("epoch,mean_train_loss\n")
            for epoch, train in enumerate(self.train_loss, 1):
                out.write(f"{epoch},{train!r}\n")
        return out.getvalue()


def write_history_csv(history, path):
    with open(path, 'w', encoding='utf-8', newline='') as handle:
        handle.write(history.to_csv())


def _check_dataset(model, dataset):
    if dataset is None or len(dataset) == 0:
        raise DataError("dataset is empty")
    if dataset.window_length != model.window_length:
        raise ShapeError(f"window-length mismatch: model expects L={model.window_length}, "
                         f"dataset has L={dataset.window_length}")


def dataset_loss(model, dataset):
    """Eval-mode MSE over a whole dataset in normalized space"""
    pred = predict_dataset(model, dataset)
    loss, _ = mse_loss(pred, dataset.targets)
    return loss


def train(model, dataset, cfg, validation=None):
    """
    Fit model in place with Adam over seeded, shuffled mini-batches (dropout active).

    Fully deterministic given (model seed, cfg.seed, data). Returns the model and
    its TrainingHistory.
    """
    _check_dataset(model, dataset)
    if validation is not None:
        _check_dataset(model, validation)

    history = TrainingHistory()
    if cfg.epochs == 0:
        return model, history

    rng = np.random.default_rng(cfg.seed)
    state = AdamState.for_params(model.parameters())
    best, best_params, stale = np.inf, None, 0
    logger.info("training %s on %d windows for up to %d epochs", model, len(dataset), cfg.epochs)

    for epoch in range(1, cfg.epochs + 1):
        if cfg.shuffle_each_epoch:
            order = rng.permutation(len(dataset))
        else:
            order = np.arange(len(dataset))

        total = 0.0
        for inputs, targets in dataset.batches(cfg.batch_size, order):
            pred, ctx = model.forward(inputs, training=True, rng=rng)
            loss, grad = mse_loss(pred, targets)
            _, grads = model.backward(ctx, grad)
            params, state = adam_step(model.parameters(), grads, state, cfg)
            model.set_parameters(params)
            total += loss * len(targets)
        history.train_loss.append(total / len(dataset))

        monitored = history.train_loss[-1]
        if validation is not None:
            monitored = dataset_loss(model, validation)
            history.val_loss.append(monitored)
        logger.debug("epoch %d: train %.6g%s", epoch, history.train_loss[-1],
                     f", val {monitored:.6g}" if validation is not None else "")

        if cfg.patience is not None:
            if monitored < best:
                best, best_params, stale = monitored, model.parameters(), 0
            else:
                stale += 1
                if stale >= cfg.patience:
                    logger.info("no improvement for %d epochs, stopping at epoch %d",
                                cfg.patience, epoch)
                    model.set_parameters(best_params)
                    history.stopped_early = True
                    break

    logger.info("finished training %s: final train loss %.6g", model, history.train_loss[-1])
    return model, history


def predict_dataset(model, dataset, batch_size=EVAL_BATCH_SIZE):
    """Eval-mode predictions for every window, [N, 1] in normalized space"""
    _check_dataset(model, dataset)
    chunks = [model.predict(inputs) for inputs, _ in dataset.batches(batch_size)]
    return np.concatenate(chunks, axis=0)


def evaluate_model(model, dataset, scaler, space='bps', batch_size=EVAL_BATCH_SIZE):
    """
    Metrics of eval-mode predictions against the dataset targets.
    space='bps' inverse-scales both sides first; space='normalized' compares in [0, 1] units.
    """
    if space not in ('bps', 'normalized'):
        raise DataError(f"unknown metric space '{space}'")
    pred = predict_dataset(model, dataset, batch_size).ravel()
    actual = dataset.targets.ravel()
    if space == 'bps':
        pred = inverse(pred, scaler)
        actual = inverse(actual, scaler)
    return compute_metrics(pred, actual, space=space)
