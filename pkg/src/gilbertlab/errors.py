"""Exception types shared across the package."""


class GilbertLabError(Exception):
    """Base class for errors raised by this package."""


class InvalidParameterError(GilbertLabError, ValueError):
    """A parameter lies outside its documented domain."""


class FixtureCapError(GilbertLabError, ValueError):
    """A fixture exceeds the exhaustive-enumeration size cap."""


class CouplingInvariantError(GilbertLabError, RuntimeError):
    """A structural invariant of the dynamic coupling was violated."""


class WidenGridError(GilbertLabError, RuntimeError):
    """Crossing curves do not bracket the transition inside the grid."""
