"""Exception types shared across the library."""


class UavcellError(Exception):
    """Base class for all library errors."""


class InvalidScenario(UavcellError):
    """A scenario violates one of its invariants; the message names it."""


class DomainError(UavcellError):
    """An input lies outside the domain an operation is defined on."""


class OutOfRegion(UavcellError):
    """A point lies outside the region a density field is defined on."""


class EmptyCell(UavcellError):
    """A cell carries (numerically) no user mass."""


class NoConvergence(UavcellError):
    """An iterative solver failed to reach its tolerance."""
