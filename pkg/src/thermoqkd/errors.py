"""Exception types shared across the package."""


class ThermoqkdError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(ThermoqkdError, ValueError):
    """Raised when an input violates a structural or range constraint."""


class UnphysicalStateError(ThermoqkdError, ValueError):
    """Raised when a covariance matrix violates the uncertainty principle
    beyond the numerical clamping tolerance."""


class DegenerateConditioningError(ThermoqkdError, ValueError):
    """Raised when conditioning on classical variables with a singular
    covariance block."""


class DegenerateEstimationError(ThermoqkdError, ValueError):
    """Raised when estimator statistics are requested for a configuration
    with no usable signal (zero modulation variance)."""
