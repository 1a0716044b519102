FORMAT_VERSION = 1


class QnetError(Exception):
    """
    Base class for every failure the switching library reports.

    Each subclass carries the process exit code the management commands use
    and renders itself as a machine-readable error object.
    """

    exit_code = 1
    kind = 'error'

    def __init__(self, message: str, details=None):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        return {
            'format_version': FORMAT_VERSION,
            'error': self.kind,
            'message': self.message,
            'details': self.details,
        }


class UsageError(QnetError):
    exit_code = 1
    kind = 'usage'


class ParseError(QnetError):
    exit_code = 2
    kind = 'parse'


class ValidationError(QnetError):
    exit_code = 3
    kind = 'validation'


class WeightDomainError(ValidationError):
    kind = 'weight_domain'


class DecompositionError(ValidationError):
    kind = 'decomposition'


class ResourceLimitError(QnetError):
    exit_code = 4
    kind = 'resource_limit'


class NumericalError(QnetError):
    exit_code = 4
    kind = 'numerical'


class DegenerateSpecError(QnetError):
    exit_code = 4
    kind = 'degenerate_spec'


class IterationLimitError(QnetError):
    """Raised when column generation hits its iteration cap; keeps the best schedule found."""

    exit_code = 4
    kind = 'iteration_limit'

    def __init__(self, message: str, best_schedule=None, details=None):
        super().__init__(message, details)
        self.best_schedule = best_schedule
