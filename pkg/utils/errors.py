class ErrorType:
    """Enumeration of error categories"""
    USAGE = "Usage Error"
    CONFIG = "Config Error"
    SHAPE = "Shape Error"
    NUMERIC = "Numeric Error"
    DATA = "Data Error"
    CHECKPOINT = "Checkpoint Error"
    CONTEXT = "Context Error"


class ForecastError(Exception):
    """Base exception for every failure the forecaster reports on purpose"""

    error_type = ErrorType.DATA

    def __init__(self, message, suggestion=None, **details):
        self.message = message
        self.suggestion = suggestion
        self.details = details
        super().__init__(self.message)

    def __repr__(self):
        return f"{self.error_type}: {self.message}"

    def to_dict(self):
        """Convert error to dictionary"""
        return {
            'type': self.error_type,
            'message': self.message,
            'suggestion': self.suggestion,
            'details': {key: str(value) for key, value in self.details.items()},
        }


class UsageError(ForecastError):
    error_type = ErrorType.USAGE


class ConfigError(ForecastError):
    error_type = ErrorType.CONFIG


class ShapeError(ForecastError):
    error_type = ErrorType.SHAPE


class NumericError(ForecastError):
    error_type = ErrorType.NUMERIC


class DataError(ForecastError):
    error_type = ErrorType.DATA


class CheckpointError(ForecastError):
    error_type = ErrorType.CHECKPOINT


class ContextError(ForecastError):
    error_type = ErrorType.CONTEXT


# Usage problems exit 1, everything data- or numeric-related exits 2
EXIT_CODES = {
    ErrorType.USAGE: 1,
    ErrorType.CONFIG: 1,
    ErrorType.SHAPE: 2,
    ErrorType.NUMERIC: 2,
    ErrorType.DATA: 2,
    ErrorType.CHECKPOINT: 2,
    ErrorType.CONTEXT: 2,
}


def exit_code_for(error):
    """Map a ForecastError onto the CLI exit code"""
    return EXIT_CODES.get(error.error_type, 2)


class ErrorHandler:
    """Collects labelled errors without aborting the surrounding run"""

    def __init__(self):
        self.errors = []

    def add_error(self, label, error):
        """Record an error under a label such as 'lstm/w6'"""
        self.errors.append((label, error))

    def has_errors(self):
        return len(self.errors) > 0

    def get_error_count(self):
        return len(self.errors)

    def get_errors_as_dict(self):
        """Get all errors as a list of dictionaries"""
        result = []
        for label, error in self.errors:
            entry = error.to_dict() if isinstance(error, ForecastError) else {
                'type': type(error).__name__,
                'message': str(error),
                'suggestion': None,
                'details': {},
            }
            entry['label'] = label
            result.append(entry)
        return result

    def format_errors(self):
        """Format all errors as readable string"""
        if not self.errors:
            return "No errors found."

        lines = [f"Found {len(self.errors)} error(s):"]
        for i, (label, error) in enumerate(self.errors, 1):
            lines.append(f"{i}. [{label}] {error!r}")
            suggestion = getattr(error, 'suggestion', None)
            if suggestion:
                lines.append(f"   Suggestion: {suggestion}")

        return "\n".join(lines)

    def clear(self):
        self.errors.clear()
