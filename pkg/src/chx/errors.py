"""Exception types shared across the package.

Plain ``ValueError`` is used for malformed arguments (wrong type, value out
of range).  The two classes below mark situations a caller may want to
distinguish: a mathematical precondition that does not hold for otherwise
well-formed input, and a computation that was refused because it would not
finish at a sane size.
"""

from __future__ import annotations


class ConstraintError(ValueError):
    """A mathematical precondition is violated (e.g. q not 1 mod k,
    character not primitive, odd order where an even one is required)."""


class ResourceError(RuntimeError):
    """The request is well-formed but too large for exact enumeration."""
