"""Exception types shared across the package."""

from __future__ import annotations


class AdescopeError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(AdescopeError, ValueError):
    """A domain invariant was violated (bad span, class mismatch, unknown id)."""


class ParseError(ValidationError):
    """A file could not be parsed; the message carries path and line context."""
