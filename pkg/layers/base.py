"""
Parameter containers, forward contexts and the Layer protocol.

Every layer implements a forward/backward pair:

    out = layer.forward(x, ctx)
    grad_x, grads = layer.backward(ctx, grad_out)

The context holds whatever the backward pass needs and may be consumed once.
"""
from collections.abc import MutableMapping

import numpy as np

from utils.errors import ConfigError, ContextError, ShapeError


class LayerParams(MutableMapping):
    """Named parameter tensors with shapes fixed at construction"""

    def __init__(self, tensors=None):
        self._tensors = {}
        for name, value in (tensors or {}).items():
            self.add(name, value)

    def add(self, name, value):
        """Register a new parameter; names must be unique"""
        if name in self._tensors:
            raise ConfigError(f"duplicate parameter name '{name}'")
        self._tensors[name] = np.array(value, dtype=np.float64, copy=True)

    def __getitem__(self, name):
        return self._tensors[name]

    def __setitem__(self, name, value):
        if name not in self._tensors:
            raise ConfigError(f"unknown parameter '{name}'",
                              suggestion=f"known parameters: {list(self._tensors)}")
        value = np.array(value, dtype=np.float64, copy=True)
        expected = self._tensors[name].shape
        if value.shape != expected:
            raise ShapeError(f"parameter '{name}' has shape {expected}, got {value.shape}")
        self._tensors[name] = value

    def __delitem__(self, name):
        raise ConfigError("parameters cannot be removed after construction")

    def __iter__(self):
        return iter(self._tensors)

    def __len__(self):
        return len(self._tensors)

    def shapes(self):
        return {name: value.shape for name, value in self._tensors.items()}

    def num_parameters(self):
        return int(sum(value.size for value in self._tensors.values()))


class LayerContext:
    """Forward activations cached for a single backward pass"""

    def __init__(self, training=False, rng=None):
        self.training = training
        self.rng = rng
        self.cache = {}
        self.children = {}
        self._backward_done = False

    def child(self, name):
        """Context of a sublayer, sharing mode and random generator"""
        if name not in self.children:
            self.children[name] = LayerContext(self.training, self.rng)
        return self.children[name]

    def mark_backward(self):
        if self._backward_done:
            raise ContextError("backward already ran for this forward context",
                               suggestion="run forward again to get a fresh context")
        if not self.cache and not self.children:
            raise ContextError("backward called before forward")
        self._backward_done = True


def init_uniform(rng, shape, fan_in):
    """Uniform in [-sqrt(1/fan_in), +sqrt(1/fan_in)]"""
    limit = np.sqrt(1.0 / fan_in)
    return rng.uniform(-limit, limit, size=shape)


def check_input(x, rank, last_dim, layer_name):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != rank:
        raise ShapeError(f"{layer_name} expects a rank-{rank} input, got shape {x.shape}")
    if last_dim is not None and x.shape[-1] != last_dim:
        raise ShapeError(f"{layer_name} expects last dimension {last_dim}, got shape {x.shape}")
    return x


def check_grad(grad_out, expected_shape, layer_name):
    grad_out = np.asarray(grad_out, dtype=np.float64)
    if grad_out.shape != tuple(expected_shape):
        raise ShapeError(f"{layer_name} upstream gradient has shape {grad_out.shape}, "
                         f"expected {tuple(expected_shape)}")
    return grad_out


class Layer:
    """Base class for every forward/backward layer"""

    kind = 'layer'

    def __init__(self, name):
        self.name = name
        self.params = LayerParams()
        self.sublayers = []

    def forward(self, x, ctx):
        raise NotImplementedError

    def backward(self, ctx, grad_out):
        raise NotImplementedError

    def output_shape(self, input_shape):
        """Shape produced for a given input shape (leading batch dimension included)"""
        return tuple(input_shape)

    def __call__(self, x, training=False, rng=None):
        ctx = LayerContext(training, rng)
        return self.forward(x, ctx), ctx

    def named_parameters(self, prefix=''):
        for name, value in self.params.items():
            yield f"{prefix}{name}", value
        for sub in self.sublayers:
            yield from sub.named_parameters(f"{prefix}{sub.name}.")

    def set_parameter(self, full_name, value):
        """Assign a parameter by its dotted name, descending into sublayers"""
        head, _, rest = full_name.partition('.')
        if rest:
            for sub in self.sublayers:
                if sub.name == head:
                    sub.set_parameter(rest, value)
                    return
            raise ConfigError(f"{self.name} has no sublayer '{head}'")
        self.params[full_name] = value

    def num_parameters(self):
        return self.params.num_parameters() + sum(sub.num_parameters() for sub in self.sublayers)

    def __repr__(self):
        return f"{type(self).__name__}({self.name})"


def prefixed(name, grads):
    return {f"{name}.{key}": value for key, value in grads.items()}
