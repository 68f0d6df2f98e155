from wpme.exceptions.verification_exceptions import (
    WpmeException,
    ParameterError,
    ManifoldMismatchError,
    IndexRangeError,
    PositivityBreachError,
    NonFiniteStateError,
    UnsupportedEstimateError,
    ScenarioError,
    CheckViolationError,
)

__all__ = [
    "WpmeException",
    "ParameterError",
    "ManifoldMismatchError",
    "IndexRangeError",
    "PositivityBreachError",
    "NonFiniteStateError",
    "UnsupportedEstimateError",
    "ScenarioError",
    "CheckViolationError",
]
