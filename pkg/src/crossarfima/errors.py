"""Exception types shared across the package."""


class CrossArfimaError(Exception):
    """Base class for all package-specific errors."""


class NotPositiveSemiDefiniteError(CrossArfimaError):
    """The requested innovation covariance matrix is not positive semi-definite."""


class DegenerateSeriesError(CrossArfimaError):
    """An input series has zero variance, so correlations are undefined."""


class InsufficientDataError(CrossArfimaError):
    """Too few usable scales/points remain for a power-law fit."""


class ConfigError(CrossArfimaError):
    """An experiment configuration is invalid or cannot be parsed."""
