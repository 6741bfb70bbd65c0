from .errors import (ErrorHandler, ErrorType, ForecastError, UsageError, ConfigError,
                     ShapeError, NumericError, DataError, CheckpointError, ContextError,
                     exit_code_for)

__all__ = ['ErrorHandler', 'ErrorType', 'ForecastError', 'UsageError', 'ConfigError',
           'ShapeError', 'NumericError', 'DataError', 'CheckpointError', 'ContextError',
           'exit_code_for']
