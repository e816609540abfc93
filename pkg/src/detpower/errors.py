"""Exception hierarchy shared by all detpower modules."""


class DetpowerError(Exception):
    """Base class for errors raised by this package."""


class ParseError(DetpowerError):
    """Input file could not be parsed (malformed JSON, NaN/Inf entries, bad schema)."""


class StructuralError(DetpowerError):
    """Objects are structurally inconsistent (dimension mismatch, incomplete strategy tree)."""


class DomainError(DetpowerError):
    """A value violates a mathematical precondition (non-Hermitian input, norm > 1, ...)."""


class ResourceError(DetpowerError):
    """A configured size cap would be exceeded."""
