"""
The four forecasting architectures.

convlstmtransnet:
    Conv1D(ReLU, same) -> LSTM(sequence) -> encoder block -> global average pool -> Dense(1)
rnn / lstm / gru:
    recurrent layer (last state) -> Dense(1)
"""
import logging

import numpy as np

from layers import (GRU, LSTM, Conv1D, Dense, GlobalAvgPool1D, LayerContext,
                    SimpleRNN, TransformerEncoderBlock)
from layers.base import prefixed
from numerics import as_tensor
from utils.errors import ConfigError, ShapeError
from .config import ModelConfig

logger = logging.getLogger(__name__)

RECURRENT_LAYERS = {
    'rnn': SimpleRNN,
    'lstm': LSTM,
    'gru': GRU,
}


class ForecastModel:
    """An ordered stack of layers mapping [batch, L, 1] windows to [batch, 1] forecasts"""

    def __init__(self, config, layers):
        self.config = config
        self.layers = list(layers)
        names = [layer.name for layer in self.layers]
        if len(set(names)) != len(names):
            raise ConfigError(f"layer names must be unique, got {names}")

    @property
    def architecture(self):
        return self.config.architecture

    @property
    def window_length(self):
        return self.config.window_length

    def check_windows(self, windows):
        windows = as_tensor(windows)
        if windows.ndim == 2:
            windows = windows[:, :, np.newaxis]
        if windows.ndim != 3 or windows.shape[2] != 1:
            raise ShapeError(f"windows must have shape [batch, L, 1], got {windows.shape}")
        if windows.shape[1] != self.window_length:
            raise ShapeError(f"window-length mismatch: model expects L={self.window_length}, "
                             f"got {windows.shape[1]}")
        return windows

    def forward(self, windows, training=False, rng=None):
        """Run every layer; returns the [batch, 1] prediction and the forward context"""
        out = self.check_windows(windows)
        ctx = LayerContext(training, rng)
        for layer in self.layers:
            out = layer.forward(out, ctx.child(layer.name))
        return out, ctx

    def backward(self, ctx, grad_pred):
        """Gradient of the loss w.r.t. the input windows and every named parameter"""
        ctx.mark_backward()
        grad = grad_pred
        grads = {}
        for layer in reversed(self.layers):
            grad, layer_grads = layer.backward(ctx.child(layer.name), grad)
            grads.update(prefixed(layer.name, layer_grads))
        return grad, grads

    def predict(self, windows):
        """Eval-mode forecast, deterministic in (parameters, input)"""
        out, _ = self.forward(windows, training=False)
        return out

    def parameters(self):
        """Ordered map of dotted parameter name to its tensor (read-only by convention)"""
        params = {}
        for layer in self.layers:
            params.update(layer.named_parameters(f"{layer.name}."))
        return params

    def parameter_shapes(self):
        return {name: value.shape for name, value in self.parameters().items()}

    def set_parameters(self, params):
        by_name = {layer.name: layer for layer in self.layers}
        for full_name, value in params.items():
            head, _, rest = full_name.partition('.')
            if head not in by_name or not rest:
                raise ConfigError(f"no parameter named '{full_name}'")
            by_name[head].set_parameter(rest, value)

    def num_parameters(self):
        return sum(layer.num_parameters() for layer in self.layers)

    def __repr__(self):
        return f"ForecastModel({self.architecture}, L={self.window_length})"


def build_model(config):
    """Build a model whose initial parameters are a pure function of config.seed"""
    if not isinstance(config, ModelConfig):
        config = ModelConfig.from_dict(dict(config))
    rng = np.random.default_rng(config.seed)
    units = config.recurrent_units

    if config.architecture == 'convlstmtransnet':
        layers = [
            Conv1D(1, config.conv_filters, config.conv_kernel, rng,
                   padding=config.conv_padding, activation='relu', name='conv1d'),
            LSTM(config.conv_filters, units, rng, return_sequence=True, name='lstm'),
            TransformerEncoderBlock(units, config.heads, config.d_ff, rng,
                                    dropout_rate=config.dropout_rate, name='encoder'),
            GlobalAvgPool1D(name='pool'),
            Dense(units, 1, rng, name='head'),
        ]
    else:
        recurrent = RECURRENT_LAYERS[config.architecture]
        layers = [
            recurrent(1, units, rng, return_sequence=False, name=config.architecture),
            Dense(units, 1, rng, name='head'),
        ]

    model = ForecastModel(config, layers)
    logger.debug("built %s with %d parameters", model, model.num_parameters())
    return model


def forward_predict(model, windows, training=False, rng=None):
    """Scalar forecast per window in normalized space, shape [batch, 1]"""
    if training and rng is None:
        rng = np.random.default_rng(model.config.seed)
    out, _ = model.forward(windows, training=training, rng=rng)
    return out
