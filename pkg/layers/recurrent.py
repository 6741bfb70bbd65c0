"""
Recurrent layers with backpropagation through time.

Row-vector convention: a gate acting on the concatenation [h_{t-1}, x_t] is a
single matrix of shape [units + d_in, units] applied as [h, x] @ W.
"""
import numpy as np

from numerics import sigmoid, tanh
from utils.errors import ConfigError, ShapeError
from .base import Layer, check_grad, check_input, init_uniform


class RecurrentLayer(Layer):
    """Shared input validation and output selection for RNN, LSTM and GRU"""

    def __init__(self, d_in, units, return_sequence, name):
        super().__init__(name)
        if d_in < 1 or units < 1:
            raise ConfigError(f"{name} dimensions must be positive (d_in={d_in}, units={units})")
        self.d_in = d_in
        self.units = units
        self.return_sequence = return_sequence

    def _check_sequence(self, x):
        x = check_input(x, 3, self.d_in, self.name)
        if x.shape[1] == 0:
            raise ShapeError(f"{self.name} needs at least one time step")
        return x

    def _initial(self, state, batch):
        if state is None:
            return np.zeros((batch, self.units))
        state = np.asarray(state, dtype=np.float64)
        return np.broadcast_to(state, (batch, self.units)).copy()

    def _select(self, hidden):
        # hidden is [batch, time + 1, units] with the initial state at index 0
        if self.return_sequence:
            return hidden[:, 1:, :].copy()
        return hidden[:, -1, :].copy()

    def _per_step_grad(self, grad_out, batch, time):
        if self.return_sequence:
            return check_grad(grad_out, (batch, time, self.units), self.name)
        grad_out = check_grad(grad_out, (batch, self.units), self.name)
        per_step = np.zeros((batch, time, self.units))
        per_step[:, -1, :] = grad_out
        return per_step

    def output_shape(self, input_shape):
        batch, time, _ = input_shape
        if self.return_sequence:
            return (batch, time, self.units)
        return (batch, self.units)


class SimpleRNN(RecurrentLayer):
    """h_t = tanh(h_{t-1} W_h + x_t W_x + b)"""

    kind = 'rnn'

    def __init__(self, d_in, units, rng, return_sequence=False, name='rnn'):
        super().__init__(d_in, units, return_sequence, name)
        self.params.add('W_h', init_uniform(rng, (units, units), units))
        self.params.add('W_x', init_uniform(rng, (d_in, units), d_in))
        self.params.add('b', np.zeros(units))

    def forward(self, x, ctx, initial_state=None):
        x = self._check_sequence(x)
        batch, time, _ = x.shape
        W_h, W_x, b = self.params['W_h'], self.params['W_x'], self.params['b']
        hidden = np.zeros((batch, time + 1, self.units))
        hidden[:, 0] = self._initial(initial_state, batch)
        for t in range(time):
            hidden[:, t + 1] = tanh(hidden[:, t] @ W_h + x[:, t] @ W_x + b)
        ctx.cache.update(x=x, hidden=hidden)
        return self._select(hidden)

    def backward(self, ctx, grad_out):
        ctx.mark_backward()
        x, hidden = ctx.cache['x'], ctx.cache['hidden']
        batch, time, _ = x.shape
        dh_steps = self._per_step_grad(grad_out, batch, time)
        W_h, W_x = self.params['W_h'], self.params['W_x']
        grads = {name: np.zeros_like(value) for name, value in self.params.items()}
        grad_in = np.zeros_like(x)
        dh_next = np.zeros((batch, self.units))
        for t in reversed(range(time)):
            dh = dh_steps[:, t] + dh_next
            da = dh * (1.0 - hidden[:, t + 1] ** 2)
            grads['W_h'] += hidden[:, t].T @ da
            grads['W_x'] += x[:, t].T @ da
            grads['b'] += da.sum(axis=0)
            grad_in[:, t] = da @ W_x.T
            dh_next = da @ W_h.T
        return grad_in, grads


LSTM_GATES = ('f', 'i', 'C', 'o')


class LSTM(RecurrentLayer):
    """
    Long short-term memory:
        f = sig([h, x] W_f + b_f)    i = sig([h, x] W_i + b_i)
        C~ = tanh([h, x] W_C + b_C)  o = sig([h, x] W_o + b_o)
        C_t = f * C_{t-1} + i * C~   h_t = o * tanh(C_t)
    """

    kind = 'lstm'

    def __init__(self, d_in, units, rng, return_sequence=False, name='lstm'):
        super().__init__(d_in, units, return_sequence, name)
        fan_in = units + d_in
        for gate in LSTM_GATES:
            self.params.add(f'W_{gate}', init_uniform(rng, (fan_in, units), fan_in))
        for gate in LSTM_GATES:
            self.params.add(f'b_{gate}', np.zeros(units))

    def forward(self, x, ctx, initial_state=None):
        """initial_state, when given, is the pair (h_0, C_0)"""
        x = self._check_sequence(x)
        batch, time, _ = x.shape
        h0, c0 = (None, None) if initial_state is None else initial_state
        p = self.params
        hidden = np.zeros((batch, time + 1, self.units))
        cell = np.zeros((batch, time + 1, self.units))
        hidden[:, 0] = self._initial(h0, batch)
        cell[:, 0] = self._initial(c0, batch)
        steps = []
        for t in range(time):
            joined = np.concatenate([hidden[:, t], x[:, t]], axis=1)
            f = sigmoid(joined @ p['W_f'] + p['b_f'])
            i = sigmoid(joined @ p['W_i'] + p['b_i'])
            candidate = tanh(joined @ p['W_C'] + p['b_C'])
            o = sigmoid(joined @ p['W_o'] + p['b_o'])
            cell[:, t + 1] = f * cell[:, t] + i * candidate
            tanh_c = tanh(cell[:, t + 1])
            hidden[:, t + 1] = o * tanh_c
            steps.append((joined, f, i, candidate, o, tanh_c))
        ctx.cache.update(x=x, hidden=hidden, cell=cell, steps=steps)
        return self._select(hidden)

    def backward(self, ctx, grad_out):
        ctx.mark_backward()
        x, cell, steps = ctx.cache['x'], ctx.cache['cell'], ctx.cache['steps']
        batch, time, _ = x.shape
        units = self.units
        dh_steps = self._per_step_grad(grad_out, batch, time)
        p = self.params
        grads = {name: np.zeros_like(value) for name, value in p.items()}
        grad_in = np.zeros_like(x)
        dh_next = np.zeros((batch, units))
        dc_next = np.zeros((batch, units))
        for t in reversed(range(time)):
            joined, f, i, candidate, o, tanh_c = steps[t]
            dh = dh_steps[:, t] + dh_next
            dc = dc_next + dh * o * (1.0 - tanh_c ** 2)
            pre_grads = {
                'f': dc * cell[:, t] * f * (1.0 - f),
                'i': dc * candidate * i * (1.0 - i),
                'C': dc * i * (1.0 - candidate ** 2),
                'o': dh * tanh_c * o * (1.0 - o),
            }
            d_joined = np.zeros_like(joined)
            for gate, da in pre_grads.items():
                grads[f'W_{gate}'] += joined.T @ da
                grads[f'b_{gate}'] += da.sum(axis=0)
                d_joined += da @ p[f'W_{gate}'].T
            dh_next = d_joined[:, :units]
            grad_in[:, t] = d_joined[:, units:]
            dc_next = dc * f
        return grad_in, grads


class GRU(RecurrentLayer):
    """
    Gated recurrent unit:
        z = sig([h, x] W_z + b_z)    r = sig([h, x] W_r + b_r)
        h~ = tanh([r * h, x] W + b)  h_t = (1 - z) * h_{t-1} + z * h~
    """

    kind = 'gru'

    def __init__(self, d_in, units, rng, return_sequence=False, name='gru'):
        super().__init__(d_in, units, return_sequence, name)
        fan_in = units + d_in
        self.params.add('W_z', init_uniform(rng, (fan_in, units), fan_in))
        self.params.add('W_r', init_uniform(rng, (fan_in, units), fan_in))
        self.params.add('W', init_uniform(rng, (fan_in, units), fan_in))
        self.params.add('b_z', np.zeros(units))
        self.params.add('b_r', np.zeros(units))
        self.params.add('b', np.zeros(units))

    def forward(self, x, ctx, initial_state=None):
        x = self._check_sequence(x)
        batch, time, _ = x.shape
        p = self.params
        hidden = np.zeros((batch, time + 1, self.units))
        hidden[:, 0] = self._initial(initial_state, batch)
        steps = []
        for t in range(time):
            h_prev = hidden[:, t]
            joined = np.concatenate([h_prev, x[:, t]], axis=1)
            z = sigmoid(joined @ p['W_z'] + p['b_z'])
            r = sigmoid(joined @ p['W_r'] + p['b_r'])
            gated = np.concatenate([r * h_prev, x[:, t]], axis=1)
            candidate = tanh(gated @ p['W'] + p['b'])
            hidden[:, t + 1] = (1.0 - z) * h_prev + z * candidate
            steps.append((joined, gated, z, r, candidate))
        ctx.cache.update(x=x, hidden=hidden, steps=steps)
        return self._select(hidden)

    def backward(self, ctx, grad_out):
        ctx.mark_backward()
        x, hidden, steps = ctx.cache['x'], ctx.cache['hidden'], ctx.cache['steps']
        batch, time, _ = x.shape
        units = self.units
        dh_steps = self._per_step_grad(grad_out, batch, time)
        p = self.params
        grads = {name: np.zeros_like(value) for name, value in p.items()}
        grad_in = np.zeros_like(x)
        dh_next = np.zeros((batch, units))
        for t in reversed(range(time)):
            joined, gated, z, r, candidate = steps[t]
            h_prev = hidden[:, t]
            dh = dh_steps[:, t] + dh_next

            dz = dh * (candidate - h_prev)
            d_candidate = dh * z
            dh_prev = dh * (1.0 - z)

            da_h = d_candidate * (1.0 - candidate ** 2)
            grads['W'] += gated.T @ da_h
            grads['b'] += da_h.sum(axis=0)
            d_gated = da_h @ p['W'].T
            d_rh = d_gated[:, :units]
            grad_in[:, t] = d_gated[:, units:]
            dr = d_rh * h_prev
            dh_prev += d_rh * r

            da_z = dz * z * (1.0 - z)
            da_r = dr * r * (1.0 - r)
            grads['W_z'] += joined.T @ da_z
            grads['W_r'] += joined.T @ da_r
            grads['b_z'] += da_z.sum(axis=0)
            grads['b_r'] += da_r.sum(axis=0)
            d_joined = da_z @ p['W_z'].T + da_r @ p['W_r'].T
            dh_prev += d_joined[:, :units]
            grad_in[:, t] += d_joined[:, units:]
            dh_next = dh_prev
        return grad_in, grads
