"""
Custom exceptions for the verification suite.
Specific error types so the harness can map failures to exit codes.
"""

from typing import Optional


class WpmeException(Exception):
    """Base exception for all verification-suite errors."""
    pass


class ParameterError(WpmeException, ValueError):
    """Raised when a parameter lies outside the admissible range of an operation."""
    pass


class ManifoldMismatchError(WpmeException, ValueError):
    """Raised when two fields live on different manifolds."""
    pass


class IndexRangeError(WpmeException, IndexError):
    """Raised when a snapshot index has no centred time difference available."""
    pass


class PositivityBreachError(WpmeException):
    """Raised when the solution drops to the positivity floor."""

    def __init__(self, time: float, min_value: float, floor: float):
        self.time = time
        self.min_value = min_value
        self.floor = floor
        super().__init__(
            f"positivity breach at t={time:.6g}: min u = {min_value:.6g} <= floor {floor:.3g}"
        )


class NonFiniteStateError(WpmeException):
    """Raised when the solution contains NaN or inf."""

    def __init__(self, time: float):
        self.time = time
        super().__init__(f"non-finite value in solution at t={time:.6g}")


class UnsupportedEstimateError(WpmeException):
    """Raised when an estimate is requested outside the form we check."""
    pass


class ScenarioError(WpmeException):
    """Raised when a scenario file cannot be parsed or validated."""

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        prefix = f"{path}: " if path else ""
        super().__init__(f"{prefix}{message}")


class CheckViolationError(WpmeException):
    """Raised when a check fails after refinement confirmation."""
    pass
