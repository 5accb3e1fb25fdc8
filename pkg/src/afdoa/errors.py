"""Exception hierarchy shared across the package."""


class AfdoaError(Exception):
    """Base class for all package errors."""


class ConfigError(AfdoaError):
    """Invalid configuration, geometry, or scenario input."""


class EstimationError(AfdoaError):
    """Numeric failure inside an estimator (singular system, no matches, ...)."""
