"""Exception types shared across the package."""


class TrimixError(Exception):
    """Base class for all trimix errors."""


class FormatError(TrimixError, ValueError):
    """A file or string does not conform to its declared format."""


class ValidationError(TrimixError, ValueError):
    """Structurally well-formed data violates a domain invariant."""
