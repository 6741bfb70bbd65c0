import numpy as np

from numerics import softmax_last_axis
from utils.errors import ConfigError
from .base import Layer, check_grad, check_input, init_uniform

PROJECTIONS = ('q', 'k', 'v', 'o')


class MultiHeadAttention(Layer):
    """
    Self-attention over [batch, time, d_model] with H heads of width d_k = d_model / H.

    The per-head Q/K/V projections are packed column-wise into one
    [d_model, d_model] matrix each; head h owns columns h*d_k:(h+1)*d_k.
    Heads are concatenated and passed through the output projection W_o.
    """

    kind = 'attention'

    def __init__(self, d_model, heads, rng, name='attention'):
        super().__init__(name)
        if heads < 1 or d_model < 1:
            raise ConfigError(f"attention needs positive d_model and heads, got {d_model}/{heads}")
        if d_model % heads:
            raise ConfigError(f"d_model {d_model} is not divisible by {heads} heads")
        self.d_model = d_model
        self.heads = heads
        self.d_k = d_model // heads
        for proj in PROJECTIONS:
            self.params.add(f'W_{proj}', init_uniform(rng, (d_model, d_model), d_model))
        for proj in PROJECTIONS:
            self.params.add(f'b_{proj}', np.zeros(d_model))

    def _split(self, t):
        # [batch, time, d_model] -> [batch, heads, time, d_k]
        batch, time, _ = t.shape
        return t.reshape(batch, time, self.heads, self.d_k).transpose(0, 2, 1, 3)

    def _merge(self, t):
        batch, _, time, _ = t.shape
        return t.transpose(0, 2, 1, 3).reshape(batch, time, self.d_model)

    def forward(self, x, ctx):
        x = check_input(x, 3, self.d_model, self.name)
        p = self.params
        q = self._split(x @ p['W_q'] + p['b_q'])
        k = self._split(x @ p['W_k'] + p['b_k'])
        v = self._split(x @ p['W_v'] + p['b_v'])
        scores = q @ k.transpose(0, 1, 3, 2) / np.sqrt(self.d_k)
        weights = softmax_last_axis(scores)
        context = self._merge(weights @ v)
        ctx.cache.update(x=x, q=q, k=k, v=v, weights=weights, context=context)
        return context @ p['W_o'] + p['b_o']

    def backward(self, ctx, grad_out):
        ctx.mark_backward()
        c = ctx.cache
        x, q, k, v, weights, context = c['x'], c['q'], c['k'], c['v'], c['weights'], c['context']
        grad_out = check_grad(grad_out, x.shape, self.name)
        p = self.params
        d = self.d_model

        grads = {
            'W_o': context.reshape(-1, d).T @ grad_out.reshape(-1, d),
            'b_o': grad_out.reshape(-1, d).sum(axis=0),
        }
        d_context = self._split(grad_out @ p['W_o'].T)
        d_weights = d_context @ v.transpose(0, 1, 3, 2)
        d_v = weights.transpose(0, 1, 3, 2) @ d_context
        # softmax Jacobian, row by row
        d_scores = weights * (d_weights - np.sum(d_weights * weights, axis=-1, keepdims=True))
        d_scores /= np.sqrt(self.d_k)
        d_q = d_scores @ k
        d_k = d_scores.transpose(0, 1, 3, 2) @ q

        flat_x = x.reshape(-1, d)
        grad_in = np.zeros_like(x)
        for proj, d_proj in (('q', d_q), ('k', d_k), ('v', d_v)):
            merged = self._merge(d_proj)
            grads[f'W_{proj}'] = flat_x.T @ merged.reshape(-1, d)
            grads[f'b_{proj}'] = merged.reshape(-1, d).sum(axis=0)
            grad_in += merged @ p[f'W_{proj}'].T
        return grad_in, grads
