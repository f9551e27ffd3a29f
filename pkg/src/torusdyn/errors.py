"""Exception hierarchy shared across the package.

Each error carries the CLI exit code it maps to, so the command line
front end can translate failures uniformly.
"""


class TorusDynError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class InputError(TorusDynError):
    """Malformed user input (bad file, bad parameter, bad spec)."""

    exit_code = 2


class MalformedCurveError(InputError):
    """A PL curve violates a structural invariant (zero-length edge,
    non-integer closing displacement, fewer than one vertex)."""


class InapplicableError(TorusDynError):
    """The requested operation does not apply to this map or curve
    (for example a rotation set of a map that is not isotopic to the
    identity)."""

    exit_code = 3


class NonGenericError(TorusDynError):
    """The configuration is too degenerate to certify (tangential or
    overlapping curve contact, tie at a threshold)."""

    exit_code = 4


class ResolutionError(NonGenericError):
    """Curve image sampling failed to produce a simple transverse PL
    curve; the caller must raise the sampling resolution."""


class DivergenceError(TorusDynError):
    """Orbit coordinates exceeded the overflow guard during iteration."""

    exit_code = 5


class UnsupportedMapError(InapplicableError):
    """The map falls outside the supported class (for example an
    orientation-reversing linear part)."""
