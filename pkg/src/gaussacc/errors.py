"""Exception hierarchy shared by all gaussacc modules."""


class GaussAccError(Exception):
    """Base class for all errors raised by gaussacc."""


class InvalidMatrixError(GaussAccError, ValueError):
    """Wrong shape, non-finite entries or asymmetric input."""


class UncertaintyViolation(GaussAccError, ValueError):
    """A covariance matrix violates the uncertainty relation."""

    def __init__(self, message, margin=None):
        super().__init__(message)
        self.margin = margin


class SingularMatrixError(GaussAccError, ValueError):
    """A matrix that must be inverted is singular or too ill-conditioned."""


class ThresholdViolation(GaussAccError):
    """The threshold condition that gates the closed-form formula fails.

    ``margin`` is the minimum eigenvalue of the matrix that should be PSD.
    """

    def __init__(self, message, margin):
        super().__init__(message)
        self.margin = margin


class ConventionError(GaussAccError):
    """A computed complex structure fails Delta-positivity (sign convention bug)."""


class TruncationError(GaussAccError):
    """Fock-space cutoff too small to reproduce the requested Gaussian moments."""


class ConfigError(GaussAccError, ValueError):
    """Malformed job configuration."""
