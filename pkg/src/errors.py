"""Exception hierarchy for the sensing toolkit.

The CLI maps each family to an exit code:
ConfigError -> 1, PreconditionError -> 2, ValidationFailure -> 3.
"""

from typing import List, Optional


class ToolkitError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code: int = 2


class ConfigError(ToolkitError):
    """Scenario or settings problem (unreadable file, missing or invalid key)."""

    exit_code = 1

    def __init__(self, message: str, key_path: Optional[str] = None):
        self.key_path = key_path
        if key_path:
            message = f"{key_path}: {message}"
        super().__init__(message)


class PreconditionError(ToolkitError, ValueError):
    """An operation was called with inputs outside its domain."""

    exit_code = 2


class RangeViolationError(PreconditionError):
    """A wavelength (or other coordinate) lies outside the sampled range."""


class RegimeError(PreconditionError):
    """Gaussian sampling requested outside the bright-beam regime."""


class InsufficientDataError(PreconditionError):
    """Too few samples, fit points or trials."""


class InfeasibleSensitivityError(PreconditionError):
    """The sensor has no transduction slope, so no finite sensitivity exists."""


class InvariantViolationError(PreconditionError):
    """Photon-count moments break a physical invariant (e.g. Cauchy-Schwarz)."""


class ValidationFailure(ToolkitError):
    """One or more oracle-vs-analytic checks exceeded tolerance."""

    exit_code = 3

    def __init__(self, message: str, failures: Optional[List[str]] = None):
        self.failures = failures or []
        super().__init__(message)
