"""Central finite differences and the analytic-vs-numeric gradient comparison."""
from dataclasses import dataclass, field

import numpy as np

from utils.errors import NumericError

DEFAULT_STEP = 1e-5
DEFAULT_TOLERANCE = 1e-4
DEFAULT_ABS_FLOOR = 1e-7


def numeric_gradient(f, x, h=DEFAULT_STEP):
    """
    Central-difference gradient of a scalar function.
    f is evaluated on a private working copy of x; x itself is never touched.
    """
    if h <= 0:
        raise NumericError(f"finite-difference step must be positive, got {h}")
    work = np.array(x, dtype=np.float64, copy=True)
    grad = np.zeros_like(work)
    for index in np.ndindex(work.shape):
        original = work[index]
        work[index] = original + h
        plus = float(f(work))
        work[index] = original - h
        minus = float(f(work))
        work[index] = original
        if not (np.isfinite(plus) and np.isfinite(minus)):
            raise NumericError(f"function is not finite near x at index {index}")
        grad[index] = (plus - minus) / (2.0 * h)
    return grad


def relative_errors(analytic, numeric, abs_floor=DEFAULT_ABS_FLOOR):
    """
    Element-wise relative error; entries whose absolute error is within
    abs_floor count as exact.
    """
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    abs_err = np.abs(analytic - numeric)
    scale = np.maximum(np.abs(analytic), np.abs(numeric))
    with np.errstate(divide='ignore', invalid='ignore'):
        rel = np.where(abs_err > abs_floor, abs_err / scale, 0.0)
    return abs_err, rel


@dataclass
class GradCheckReport:
    """Outcome of comparing analytic gradients with finite differences"""
    max_abs_error: float = 0.0
    max_rel_error: float = 0.0
    per_parameter_errors: dict = field(default_factory=dict)
    tolerance: float = DEFAULT_TOLERANCE

    @property
    def passed(self):
        return self.max_rel_error <= self.tolerance

    def to_dict(self):
        return {
            'passed': self.passed,
            'tolerance': self.tolerance,
            'max_abs_error': self.max_abs_error,
            'max_rel_error': self.max_rel_error,
            'per_parameter_errors': dict(self.per_parameter_errors),
        }


def check_gradients(loss_fn, inputs, analytic, tolerance=DEFAULT_TOLERANCE,
                    abs_floor=DEFAULT_ABS_FLOOR, h=DEFAULT_STEP):
    """
    Compare analytic gradients against central differences.

    Args:
        loss_fn: callable taking a dict name -> array and returning a scalar
        inputs: dict name -> array at which gradients are checked
        analytic: dict name -> analytic gradient, same keys and shapes as inputs
    """
    report = GradCheckReport(tolerance=tolerance)
    for name, value in inputs.items():
        def partial(candidate, name=name):
            trial = dict(inputs)
            trial[name] = candidate
            return loss_fn(trial)

        numeric = numeric_gradient(partial, value, h)
        abs_err, rel = relative_errors(analytic[name], numeric, abs_floor)
        worst = float(rel.max()) if rel.size else 0.0
        report.per_parameter_errors[name] = worst
        report.max_rel_error = max(report.max_rel_error, worst)
        report.max_abs_error = max(report.max_abs_error,
                                   float(abs_err.max()) if abs_err.size else 0.0)
    return report
