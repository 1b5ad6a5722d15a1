"""
Planner exception hierarchy

Services raise these; routers and the CLI translate them into HTTP status
codes and exit statuses.
"""
from typing import Optional


class PlannerError(Exception):
    """Base class for every failure raised by the planner services"""


class ParameterError(PlannerError, ValueError):
    """Input outside the documented domain of an operation"""


class ConfigFileError(ParameterError):
    """Malformed scenario file; carries the offending line number"""

    def __init__(self, message: str, line_number: Optional[int] = None, path: Optional[str] = None):
        self.line_number = line_number
        self.path = path
        location = ""
        if path:
            location = f"{path}:"
        if line_number is not None:
            location = f"{location}{line_number}: "
        elif location:
            location = f"{location} "
        super().__init__(f"{location}{message}")


class DomainError(PlannerError):
    """Special function evaluated outside its convergence domain"""


class AccuracyError(PlannerError):
    """Numerical method could not reach the requested accuracy"""

    def __init__(self, message: str, estimate: Optional[float] = None):
        self.estimate = estimate
        super().__init__(message)


class NumericalError(PlannerError):
    """Linear-algebra breakdown (singular or indefinite matrices)"""


class ConvergenceError(PlannerError):
    """Iterative solver stopped without meeting its tolerance"""

    def __init__(self, message: str, last_iterate: Optional[float] = None, residual: Optional[float] = None):
        self.last_iterate = last_iterate
        self.residual = residual
        super().__init__(message)


class NoSolutionError(PlannerError):
    """No admissible solution exists and no fallback was permitted"""


__all__ = [
    "PlannerError",
    "ParameterError",
    "ConfigFileError",
    "DomainError",
    "AccuracyError",
    "NumericalError",
    "ConvergenceError",
    "NoSolutionError",
]
