"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes, so library code should raise the most
specific class that applies.
"""


class CorrdynError(Exception):
    """Base class for all package errors."""


class ConfigError(CorrdynError):
    """Malformed run configuration or unparsable input."""


class SizeCapError(CorrdynError):
    """A dense computation was requested beyond its site-count cap."""


class NumericError(CorrdynError):
    """A numerical operation cannot proceed at the requested point."""


class PoleProximityError(NumericError):
    """Resolvent evaluated at or too close to a pole."""

    def __init__(self, message, nearest_pole=None):
        super().__init__(message)
        self.nearest_pole = nearest_pole


class StepTooLargeError(NumericError):
    """Integrator step exceeds the stability budget."""


class DivergentSeriesError(NumericError):
    """Perturbative series does not converge at the requested point."""
