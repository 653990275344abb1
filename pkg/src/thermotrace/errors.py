"""Exception types shared across the package.

The split mirrors how the command line layer maps failures to exit codes:
configuration and domain problems are user-fixable (exit 2), while
tolerance and non-finite failures mean the numerics could not deliver the
requested accuracy (exit 3).
"""


class ThermotraceError(Exception):
    """Base class for errors raised by this package."""


class DomainError(ThermotraceError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ToleranceError(ThermotraceError, ArithmeticError):
    """A requested accuracy could not be certified.

    Raised when a truncation bound cannot be pushed below the requested
    tail tolerance within the term budget, or when an internal consistency
    assertion fails by more than its stated tolerance.
    """


class NonFiniteError(ThermotraceError, ArithmeticError):
    """A time stepper produced NaN or infinity; the message reports the step."""


class NotACrossingError(DomainError):
    """The frequency passed to a crossing-only map is not an axis crossing."""


class MissingArtifactError(ThermotraceError, FileNotFoundError):
    """The report was asked to aggregate artifact files that do not exist."""
