import numpy as np

from numerics import matmul, reduce_mean
from utils.errors import ConfigError, ShapeError
from .base import Layer, check_grad, check_input, init_uniform


class Dense(Layer):
    """Affine map y = xW + b over the last axis"""

    kind = 'dense'

    def __init__(self, d_in, d_out, rng, name='dense'):
        super().__init__(name)
        if d_in < 1 or d_out < 1:
            raise ConfigError(f"dense dimensions must be positive, got {d_in}x{d_out}")
        self.d_in = d_in
        self.d_out = d_out
        self.params.add('W', init_uniform(rng, (d_in, d_out), d_in))
        self.params.add('b', np.zeros(d_out))

    def forward(self, x, ctx):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim < 1 or x.shape[-1] != self.d_in:
            raise ShapeError(f"{self.name} expects last dimension {self.d_in}, got shape {x.shape}")
        ctx.cache['x'] = x
        out = matmul(x.reshape(-1, self.d_in), self.params['W']) + self.params['b']
        return out.reshape(x.shape[:-1] + (self.d_out,))

    def backward(self, ctx, grad_out):
        ctx.mark_backward()
        x = ctx.cache['x']
        grad_out = check_grad(grad_out, x.shape[:-1] + (self.d_out,), self.name)
        flat_x = x.reshape(-1, self.d_in)
        flat_g = grad_out.reshape(-1, self.d_out)
        grads = {'W': flat_x.T @ flat_g, 'b': flat_g.sum(axis=0)}
        return grad_out @ self.params['W'].T, grads

    def output_shape(self, input_shape):
        return tuple(input_shape[:-1]) + (self.d_out,)


class Dropout(Layer):
    """Inverted dropout: survivors scaled by 1/(1-rate) in training, identity in eval"""

    kind = 'dropout'

    def __init__(self, rate, name='dropout'):
        super().__init__(name)
        if not 0.0 <= rate < 1.0:
            raise ConfigError(f"dropout rate must lie in [0, 1), got {rate}")
        self.rate = rate

    def forward(self, x, ctx):
        x = np.asarray(x, dtype=np.float64)
        if not ctx.training or self.rate == 0.0:
            ctx.cache['mask'] = None
            return x
        if ctx.rng is None:
            raise ConfigError("dropout in training mode needs a seeded random generator")
        mask = (ctx.rng.random(x.shape) >= self.rate) / (1.0 - self.rate)
        ctx.cache['mask'] = mask
        return x * mask

    def backward(self, ctx, grad_out):
        ctx.mark_backward()
        mask = ctx.cache['mask']
        grad_out = np.asarray(grad_out, dtype=np.float64)
        if mask is None:
            return grad_out, {}
        return check_grad(grad_out, mask.shape, self.name) * mask, {}


class GlobalAvgPool1D(Layer):
    """Mean over the temporal axis: [batch, time, d] -> [batch, d]"""

    kind = 'pool'

    def __init__(self, name='pool'):
        super().__init__(name)

    def forward(self, x, ctx):
        x = check_input(x, 3, None, self.name)
        if x.shape[1] == 0:
            raise ShapeError(f"{self.name} needs at least one time step")
        ctx.cache['shape'] = x.shape
        return reduce_mean(x, 1)

    def backward(self, ctx, grad_out):
        ctx.mark_backward()
        batch, time, width = ctx.cache['shape']
        grad_out = check_grad(grad_out, (batch, width), self.name)
        grad_in = np.repeat(grad_out[:, np.newaxis, :], time, axis=1) / time
        return grad_in, {}

    def output_shape(self, input_shape):
        return (input_shape[0], input_shape[2])


class LayerNorm(Layer):
    """Per-slice standardization over the last axis with a learned gain and bias"""

    kind = 'norm'

    def __init__(self, d, epsilon=1e-5, name='norm'):
        super().__init__(name)
        if d < 1:
            raise ConfigError(f"layer norm width must be positive, got {d}")
        self.d = d
        self.epsilon = epsilon
        self.params.add('gain', np.ones(d))
        self.params.add('bias', np.zeros(d))

    def forward(self, x, ctx):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim < 1 or x.shape[-1] != self.d:
            raise ShapeError(f"{self.name} expects last dimension {self.d}, got shape {x.shape}")
        mean = np.mean(x, axis=-1, keepdims=True)
        var = np.var(x, axis=-1, keepdims=True)
        inv_std = 1.0 / np.sqrt(var + self.epsilon)
        normalized = (x - mean) * inv_std
        ctx.cache['normalized'] = normalized
        ctx.cache['inv_std'] = inv_std
        return normalized * self.params['gain'] + self.params['bias']

    def backward(self, ctx, grad_out):
        ctx.mark_backward()
        normalized = ctx.cache['normalized']
        inv_std = ctx.cache['inv_std']
        grad_out = check_grad(grad_out, normalized.shape, self.name)
        flat_g = grad_out.reshape(-1, self.d)
        grads = {
            'gain': np.sum(flat_g * normalized.reshape(-1, self.d), axis=0),
            'bias': np.sum(flat_g, axis=0),
        }
        d_norm = grad_out * self.params['gain']
        grad_in = inv_std * (d_norm
                             - np.mean(d_norm, axis=-1, keepdims=True)
                             - normalized * np.mean(d_norm * normalized, axis=-1, keepdims=True))
        return grad_in, grads
