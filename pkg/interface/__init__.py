from .metrics import MetricsReport, compute_metrics

# benchmark, export, gradient_suite and cli import training; import them by module path
__all__ = ['MetricsReport', 'compute_metrics']
