import numpy as np

from numerics import relu
from utils.errors import ConfigError, ShapeError
from .attention import MultiHeadAttention
from .base import Layer, check_grad, init_uniform, prefixed
from .core import Dropout, LayerNorm


class PositionWiseFFN(Layer):
    """FFN(x) = max(0, x W_1 + b_1) W_2 + b_2, shared across time positions"""

    kind = 'ffn'

    def __init__(self, d_model, d_ff, rng, name='ffn'):
        super().__init__(name)
        if d_model < 1 or d_ff < 1:
            raise ConfigError(f"ffn dimensions must be positive, got {d_model}/{d_ff}")
        self.d_model = d_model
        self.d_ff = d_ff
        self.params.add('W_1', init_uniform(rng, (d_model, d_ff), d_model))
        self.params.add('b_1', np.zeros(d_ff))
        self.params.add('W_2', init_uniform(rng, (d_ff, d_model), d_ff))
        self.params.add('b_2', np.zeros(d_model))

    def forward(self, x, ctx):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim < 1 or x.shape[-1] != self.d_model:
            raise ShapeError(f"{self.name} expects last dimension {self.d_model}, got shape {x.shape}")
        p = self.params
        pre = x @ p['W_1'] + p['b_1']
        hidden = relu(pre)
        ctx.cache.update(x=x, pre=pre, hidden=hidden)
        return hidden @ p['W_2'] + p['b_2']

    def backward(self, ctx, grad_out):
        ctx.mark_backward()
        x, pre, hidden = ctx.cache['x'], ctx.cache['pre'], ctx.cache['hidden']
        grad_out = check_grad(grad_out, x.shape, self.name)
        p = self.params
        flat_g = grad_out.reshape(-1, self.d_model)
        d_hidden = (grad_out @ p['W_2'].T) * (pre > 0)
        flat_dh = d_hidden.reshape(-1, self.d_ff)
        grads = {
            'W_1': x.reshape(-1, self.d_model).T @ flat_dh,
            'b_1': flat_dh.sum(axis=0),
            'W_2': hidden.reshape(-1, self.d_ff).T @ flat_g,
            'b_2': flat_g.sum(axis=0),
        }
        return d_hidden @ p['W_1'].T, grads


class TransformerEncoderBlock(Layer):
    """
    One post-norm encoder block:
        out_1 = LN(x + Dropout(MHA(x)))
        out_2 = LN(out_1 + Dropout(FFN(out_1)))
    """

    kind = 'encoder'

    def __init__(self, d_model, heads, d_ff, rng, dropout_rate=0.1, epsilon=1e-5, name='encoder'):
        super().__init__(name)
        self.d_model = d_model
        self.attention = MultiHeadAttention(d_model, heads, rng, name='attention')
        self.dropout_1 = Dropout(dropout_rate, name='dropout_1')
        self.norm_1 = LayerNorm(d_model, epsilon, name='norm_1')
        self.ffn = PositionWiseFFN(d_model, d_ff, rng, name='ffn')
        self.dropout_2 = Dropout(dropout_rate, name='dropout_2')
        self.norm_2 = LayerNorm(d_model, epsilon, name='norm_2')
        self.sublayers = [self.attention, self.dropout_1, self.norm_1,
                          self.ffn, self.dropout_2, self.norm_2]

    def forward(self, x, ctx):
        attended = self.attention.forward(x, ctx.child('attention'))
        attended = self.dropout_1.forward(attended, ctx.child('dropout_1'))
        out_1 = self.norm_1.forward(x + attended, ctx.child('norm_1'))
        fed = self.ffn.forward(out_1, ctx.child('ffn'))
        fed = self.dropout_2.forward(fed, ctx.child('dropout_2'))
        return self.norm_2.forward(out_1 + fed, ctx.child('norm_2'))

    def backward(self, ctx, grad_out):
        ctx.mark_backward()
        grads = {}

        d_sum_2, g = self.norm_2.backward(ctx.child('norm_2'), grad_out)
        grads.update(prefixed('norm_2', g))
        d_fed, _ = self.dropout_2.backward(ctx.child('dropout_2'), d_sum_2)
        d_out_1, g = self.ffn.backward(ctx.child('ffn'), d_fed)
        grads.update(prefixed('ffn', g))
        d_out_1 = d_out_1 + d_sum_2

        d_sum_1, g = self.norm_1.backward(ctx.child('norm_1'), d_out_1)
        grads.update(prefixed('norm_1', g))
        d_attended, _ = self.dropout_1.backward(ctx.child('dropout_1'), d_sum_1)
        d_x, g = self.attention.backward(ctx.child('attention'), d_attended)
        grads.update(prefixed('attention', g))
        return d_x + d_sum_1, grads
