import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from numerics import elementwise
from utils.errors import ConfigError, ShapeError
from .base import Layer, check_grad, check_input, init_uniform

PADDINGS = ('same', 'valid')


class Conv1D(Layer):
    """
    Temporal convolution c_i = sum_j k_j * x_{i+j} over [batch, time, channels].

    'same' padding keeps the time length (extra zero goes to the right for even
    kernels); 'valid' shrinks it to time - k + 1.
    """

    kind = 'conv1d'

    def __init__(self, channels_in, filters, kernel_size, rng, padding='same',
                 activation='relu', name='conv1d'):
        super().__init__(name)
        if kernel_size < 1 or filters < 1 or channels_in < 1:
            raise ConfigError(f"conv1d dimensions must be positive "
                              f"(channels_in={channels_in}, filters={filters}, kernel={kernel_size})")
        if padding not in PADDINGS:
            raise ConfigError(f"unknown padding '{padding}'", suggestion=f"use one of {PADDINGS}")
        if activation not in (None, 'relu'):
            raise ConfigError(f"conv1d supports activation 'relu' or None, got '{activation}'")
        self.channels_in = channels_in
        self.filters = filters
        self.kernel_size = kernel_size
        self.padding = padding
        self.activation = activation
        self.params.add('kernel', init_uniform(rng, (kernel_size, channels_in, filters),
                                               kernel_size * channels_in))
        self.params.add('bias', np.zeros(filters))

    def _pad_widths(self):
        if self.padding == 'valid':
            return 0, 0
        left = (self.kernel_size - 1) // 2
        return left, self.kernel_size - 1 - left

    def forward(self, x, ctx):
        x = check_input(x, 3, self.channels_in, self.name)
        if self.padding == 'valid' and x.shape[1] < self.kernel_size:
            raise ShapeError(f"window of {x.shape[1]} steps is shorter than kernel "
                             f"{self.kernel_size} under valid padding")
        left, right = self._pad_widths()
        padded = np.pad(x, ((0, 0), (left, right), (0, 0)))
        # [batch, time', channels, k]
        windows = sliding_window_view(padded, self.kernel_size, axis=1)
        pre = np.einsum('btck,kcf->btf', windows, self.params['kernel']) + self.params['bias']
        ctx.cache.update(windows=windows, padded_shape=padded.shape, time=x.shape[1], pre=pre)
        if self.activation is None:
            return pre
        return elementwise(pre, self.activation)

    def backward(self, ctx, grad_out):
        ctx.mark_backward()
        pre = ctx.cache['pre']
        windows = ctx.cache['windows']
        grad_out = check_grad(grad_out, pre.shape, self.name)
        if self.activation == 'relu':
            grad_out = grad_out * (pre > 0)

        kernel = self.params['kernel']
        grads = {
            'kernel': np.einsum('btck,btf->kcf', windows, grad_out),
            'bias': grad_out.sum(axis=(0, 1)),
        }
        out_time = grad_out.shape[1]
        grad_padded = np.zeros(ctx.cache['padded_shape'])
        for j in range(self.kernel_size):
            grad_padded[:, j:j + out_time, :] += grad_out @ kernel[j].T
        left, _ = self._pad_widths()
        return grad_padded[:, left:left + ctx.cache['time'], :], grads

    def output_shape(self, input_shape):
        batch, time, _ = input_shape
        if self.padding == 'valid':
            time = time - self.kernel_size + 1
        return (batch, time, self.filters)
