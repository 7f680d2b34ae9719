class LabError(Exception):
    """
    Base class of every error raised by the lab.

    **Parameters:**

    * **message** - Human readable description of the failure.
    * **errors** - Optional list of additional messages (one per offending item).
    """
    error_code = 'LAB-000'

    def __init__(self, message, errors=None):
        super().__init__(message)
        self.message = message
        self.errors = errors or []

    def __str__(self):
        if not self.errors:
            return f'{self.error_code}: {self.message}'
        return f'{self.error_code}: {self.message} ({"; ".join(self.errors)})'


class DomainError(LabError):
    error_code = 'LAB-001'


class EvaluationError(LabError):
    error_code = 'LAB-002'

    def __init__(self, message, point=None, errors=None):
        super().__init__(message, errors=errors)
        self.point = point


class SingularityError(LabError):
    error_code = 'LAB-003'

    def __init__(self, point, nearest):
        super().__init__(
            f'Kernel evaluated at t={point.t!r} (k={point.k}, r={point.r}) '
            f'within guard distance of the singular point {nearest!r}.',
        )
        self.point = point
        self.nearest = nearest


class ConvergenceError(LabError):
    error_code = 'LAB-004'


class ConfigurationError(LabError):
    error_code = 'LAB-005'


class InsufficientDataError(LabError):
    error_code = 'LAB-006'
