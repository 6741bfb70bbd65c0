"""
Finite-difference checks of every layer and of small assembled models.

Each check evaluates a scalar MSE objective against a random target and
compares the analytic gradient w.r.t. the input and every parameter with
central differences.
"""
import logging

import numpy as np

from config import get_config
from layers import (GRU, LSTM, Conv1D, Dense, Dropout, GlobalAvgPool1D, LayerNorm,
                    MultiHeadAttention, PositionWiseFFN, SimpleRNN, TransformerEncoderBlock)
from models.architectures import build_model
from models.config import ModelConfig
from numerics import check_gradients
from training.losses import mse_loss

logger = logging.getLogger(__name__)

DROPOUT_SEED = 1234

# (check name, layer factory taking an rng, input shape, training mode)
LAYER_CASES = [
    ('conv1d', lambda rng: Conv1D(1, 3, 3, rng), (2, 6, 1), False),
    ('conv1d', lambda rng: Conv1D(2, 4, 2, rng), (3, 5, 2), False),
    ('conv1d', lambda rng: Conv1D(3, 2, 3, rng, padding='valid', activation=None), (2, 7, 3), False),
    ('dense', lambda rng: Dense(3, 2, rng), (4, 3), False),
    ('dense', lambda rng: Dense(5, 1, rng), (2, 5), False),
    ('dense', lambda rng: Dense(2, 3, rng), (2, 4, 2), False),
    ('rnn', lambda rng: SimpleRNN(1, 3, rng), (2, 4, 1), False),
    ('rnn', lambda rng: SimpleRNN(2, 4, rng, return_sequence=True), (3, 3, 2), False),
    ('rnn', lambda rng: SimpleRNN(3, 2, rng), (1, 6, 3), False),
    ('lstm', lambda rng: LSTM(1, 3, rng), (2, 4, 1), False),
    ('lstm', lambda rng: LSTM(2, 4, rng, return_sequence=True), (3, 3, 2), False),
    ('lstm', lambda rng: LSTM(3, 2, rng), (1, 6, 3), False),
    ('gru', lambda rng: GRU(1, 3, rng), (2, 4, 1), False),
    ('gru', lambda rng: GRU(2, 4, rng, return_sequence=True), (3, 3, 2), False),
    ('gru', lambda rng: GRU(3, 2, rng), (1, 6, 3), False),
    ('multi_head_attention', lambda rng: MultiHeadAttention(4, 2, rng), (2, 3, 4), False),
    ('multi_head_attention', lambda rng: MultiHeadAttention(6, 3, rng), (1, 4, 6), False),
    ('multi_head_attention', lambda rng: MultiHeadAttention(4, 1, rng), (2, 5, 4), False),
    ('position_wise_ffn', lambda rng: PositionWiseFFN(4, 8, rng), (2, 3, 4), False),
    ('position_wise_ffn', lambda rng: PositionWiseFFN(3, 5, rng), (1, 4, 3), False),
    ('position_wise_ffn', lambda rng: PositionWiseFFN(2, 6, rng), (3, 2, 2), False),
    ('layer_norm', lambda rng: LayerNorm(4), (2, 3, 4), False),
    ('layer_norm', lambda rng: LayerNorm(3), (5, 3), False),
    ('layer_norm', lambda rng: LayerNorm(6), (1, 2, 6), False),
    ('global_avg_pool', lambda rng: GlobalAvgPool1D(), (2, 5, 3), False),
    ('global_avg_pool', lambda rng: GlobalAvgPool1D(), (1, 6, 4), False),
    ('global_avg_pool', lambda rng: GlobalAvgPool1D(), (3, 2, 2), False),
    ('dropout', lambda rng: Dropout(0.3), (2, 3, 4), True),
    ('encoder_block', lambda rng: TransformerEncoderBlock(4, 2, 8, rng), (2, 3, 4), False),
    ('encoder_block', lambda rng: TransformerEncoderBlock(6, 3, 5, rng), (1, 4, 6), False),
    ('encoder_block', lambda rng: TransformerEncoderBlock(2, 1, 4, rng), (2, 2, 2), False),
]

SMALL_MODEL = dict(conv_filters=4, recurrent_units=4, heads=2, d_ff=8)

# (check name, model config, batch size)
MODEL_CASES = [
    ('convlstmtransnet', ModelConfig(window_length=6, **SMALL_MODEL), 2),
    ('convlstmtransnet', ModelConfig(window_length=4, conv_padding='valid', **SMALL_MODEL), 3),
    ('convlstmtransnet', ModelConfig(window_length=5, conv_kernel=2, **SMALL_MODEL), 1),
    ('rnn', ModelConfig(architecture='rnn', window_length=6, recurrent_units=4), 2),
    ('lstm', ModelConfig(architecture='lstm', window_length=6, recurrent_units=4), 2),
    ('gru', ModelConfig(architecture='gru', window_length=6, recurrent_units=4), 2),
]


def _settings():
    settings = get_config()
    return dict(tolerance=settings.GRADCHECK_TOLERANCE,
                abs_floor=settings.GRADCHECK_ABS_FLOOR,
                h=settings.FINITE_DIFF_STEP)


def gradient_check_layer(layer, x, target, training=False):
    """
    Check d(MSE)/d(input) and d(MSE)/d(every parameter) of a single layer.
    Dropout in training mode draws the same mask on every evaluation.
    """
    def run(candidate_x):
        rng = np.random.default_rng(DROPOUT_SEED) if training else None
        return layer(candidate_x, training=training, rng=rng)

    originals = dict(layer.named_parameters())
    out, ctx = run(x)
    _, grad_out = mse_loss(out, target)
    grad_x, grads = layer.backward(ctx, grad_out)

    def loss_fn(trial):
        try:
            for name, value in trial.items():
                if name != 'input':
                    layer.set_parameter(name, value)
            loss, _ = mse_loss(run(trial['input'])[0], target)
        finally:
            for name, value in originals.items():
                layer.set_parameter(name, value)
        return loss

    inputs = {'input': x, **originals}
    analytic = {'input': grad_x, **grads}
    return check_gradients(loss_fn, inputs, analytic, **_settings())


def gradient_check_model(model, windows, target):
    """Same check over an assembled model, eval mode, dotted parameter names"""
    originals = model.parameters()
    pred, ctx = model.forward(windows)
    _, grad_pred = mse_loss(pred, target)
    grad_x, grads = model.backward(ctx, grad_pred)

    def loss_fn(trial):
        params = {name: value for name, value in trial.items() if name != 'input'}
        try:
            model.set_parameters(params)
            loss, _ = mse_loss(model.predict(trial['input']), target)
        finally:
            model.set_parameters(originals)
        return loss

    inputs = {'input': model.check_windows(windows), **originals}
    analytic = {'input': grad_x, **grads}
    return check_gradients(loss_fn, inputs, analytic, **_settings())


def run_gradient_suite(seed=0):
    """Run every layer and model check; returns an ordered dict 'name[i]' -> GradCheckReport"""
    rng = np.random.default_rng(seed)
    reports = {}
    counts = {}

    for name, factory, shape, training in LAYER_CASES:
        layer = factory(rng)
        x = rng.normal(size=shape)
        target = rng.normal(size=layer.output_shape(shape))
        label = f"{name}[{counts.get(name, 0)}]"
        counts[name] = counts.get(name, 0) + 1
        reports[label] = gradient_check_layer(layer, x, target, training)

    for name, model_cfg, batch in MODEL_CASES:
        model = build_model(model_cfg.replace(seed=seed))
        windows = rng.uniform(0.0, 1.0, size=(batch, model_cfg.window_length, 1))
        target = rng.uniform(0.0, 1.0, size=(batch, 1))
        label = f"model_{name}[{counts.get('model_' + name, 0)}]"
        counts['model_' + name] = counts.get('model_' + name, 0) + 1
        reports[label] = gradient_check_model(model, windows, target)

    failed = [label for label, report in reports.items() if not report.passed]
    for label in failed:
        logger.warning("gradient check %s failed: max relative error %.3g",
                       label, reports[label].max_rel_error)
    logger.info("gradient suite: %d of %d checks passed", len(reports) - len(failed), len(reports))
    return reports
