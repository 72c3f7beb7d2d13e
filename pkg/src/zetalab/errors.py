"""Exception types shared across the package.

Every guard in the library raises one of these rather than a bare
ValueError, so callers (and the CLI) can tell a misuse apart from a
numerical breakdown.
"""

from __future__ import annotations


class ZetalabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(ZetalabError, ValueError):
    """Argument lies outside the documented domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at (or too near) a pole.

    Attributes
    ----------
    location : complex
        Where the offending pole sits.
    """

    def __init__(self, message: str, location: complex = 0j):
        super().__init__(message)
        self.location = location


class CapabilityError(ZetalabError, ValueError):
    """Request exceeds the sizes/ranges this implementation supports."""


class PreconditionError(ZetalabError, ValueError):
    """A documented precondition of the operation does not hold."""


class DivergenceError(ZetalabError, ValueError):
    """The requested quantity is a divergent integral or series."""


class ConvergenceError(ZetalabError, RuntimeError):
    """An iterative scheme ran out of budget before reaching tolerance.

    Attributes
    ----------
    best : object or None
        Best estimate available when the budget ran out (often a
        QuadResult), for diagnostic use only.
    """

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


class ResolutionError(ZetalabError, RuntimeError):
    """A contour/winding computation could not be resolved to an integer."""
