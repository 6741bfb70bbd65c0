"""Adam with bias-corrected first and second moment estimates."""
from dataclasses import dataclass, field

import numpy as np

from utils.errors import NumericError, ShapeError


@dataclass
class AdamState:
    """Per-parameter moments m, v and the step counter t"""
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)
    t: int = 0

    @classmethod
    def for_params(cls, params):
        return cls(m={name: np.zeros_like(value) for name, value in params.items()},
                   v={name: np.zeros_like(value) for name, value in params.items()})


def adam_step(params, grads, state, cfg):
    """
    One Adam update. Returns (new_params, new_state); inputs are left untouched.

    m = b1*m + (1-b1)*g,  v = b2*v + (1-b2)*g^2
    theta <- theta - lr * m_hat / (sqrt(v_hat) + eps)
    """
    for name, value in params.items():
        if name not in grads:
            raise ShapeError(f"no gradient for parameter '{name}'")
        if grads[name].shape != value.shape:
            raise ShapeError(f"gradient for '{name}' has shape {grads[name].shape}, "
                             f"expected {value.shape}")
        if not np.all(np.isfinite(grads[name])):
            raise NumericError(f"non-finite gradient for parameter '{name}'",
                               suggestion="lower the learning rate or check the input scaling")

    t = state.t + 1
    correction_1 = 1.0 - cfg.beta1 ** t
    correction_2 = 1.0 - cfg.beta2 ** t
    new_params, new_m, new_v = {}, {}, {}
    for name, value in params.items():
        g = grads[name]
        m = cfg.beta1 * state.m.get(name, np.zeros_like(value)) + (1.0 - cfg.beta1) * g
        v = cfg.beta2 * state.v.get(name, np.zeros_like(value)) + (1.0 - cfg.beta2) * (g * g)
        m_hat = m / correction_1
        v_hat = v / correction_2
        new_params[name] = value - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.eps_adam)
        new_m[name] = m
        new_v[name] = v
    return new_params, AdamState(m=new_m, v=new_v, t=t)
