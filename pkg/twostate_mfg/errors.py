"""Exception hierarchy shared by the solver suite."""

from __future__ import annotations

from typing import Any, Dict, Optional


class TwoStateError(Exception):
    """Base exception for every failure raised by the package."""


class ConfigurationError(TwoStateError, ValueError):
    """Raised when a run description, preset or grid/time setup is invalid."""


class InvalidStateError(TwoStateError, ValueError):
    """Raised for a state index outside {1, 2}."""


class DomainError(TwoStateError, ValueError):
    """Raised when an argument lies outside the domain of an operation."""


class MissingPotentialError(TwoStateError, ValueError):
    """Raised when a potential formulation is requested for a model without one."""


class NotInvertibleError(TwoStateError, ValueError):
    """Raised when a field is not monotone and therefore cannot be inverted."""

    def __init__(self, message: str, location: Optional[float] = None) -> None:
        super().__init__(message)
        self.location = location


class OutputFormatError(TwoStateError, ValueError):
    """Raised for malformed CSV input or unknown plot columns."""


class NumericalError(TwoStateError, RuntimeError):
    """Raised when a time march cannot continue."""

    def __init__(
        self,
        message: str,
        step: Optional[int] = None,
        diagnostics: Optional[Dict[str, Any]] = None,
    ) -> None:
        if step is not None:
            message = f"{message} (step {step})"
        super().__init__(message)
        self.step = step
        self.diagnostics = diagnostics or {}


class CFLViolationError(NumericalError):
    """Raised when an explicit step would exceed a CFL number of one."""


class NonFiniteError(NumericalError):
    """Raised when a step produces NaN or infinite values."""


__all__ = [
    "CFLViolationError",
    "ConfigurationError",
    "DomainError",
    "InvalidStateError",
    "MissingPotentialError",
    "NonFiniteError",
    "NotInvertibleError",
    "NumericalError",
    "OutputFormatError",
    "TwoStateError",
]
