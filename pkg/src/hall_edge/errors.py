"""Exception types shared across the package.

The hierarchy mirrors how failures surface at the command line: config
problems, violated mathematical preconditions, accuracy targets that the
requested resolution cannot meet, and resource guards.
"""


class HallEdgeError(Exception):
    """Base class for package errors."""


class ConfigError(HallEdgeError):
    """Malformed or contradictory configuration input."""


class PreconditionError(HallEdgeError, ValueError):
    """A documented mathematical precondition was violated."""


class ModeIndexError(PreconditionError):
    """A fermion mode index falls outside the active window."""


class UnsupportedOrderError(PreconditionError):
    """A correlator order beyond the implemented range was requested."""


class DegenerateInputError(PreconditionError):
    """Coincident points or poles where distinctness is required."""


class AccuracyError(HallEdgeError):
    """A numerical result failed its internal accuracy estimate."""


class ResourceLimitError(HallEdgeError):
    """A computation would exceed the configured size or cost budget."""
