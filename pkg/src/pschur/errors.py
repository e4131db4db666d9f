"""Exception types shared across the toolkit."""


class PschurError(Exception):
    """Base class for all toolkit errors."""


class InputError(PschurError, ValueError):
    """Malformed user input: bad word, unknown generator, dimension mismatch."""


class ParseError(InputError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class InconsistentPresentation(PschurError):
    """A pc presentation failed an overlap test."""

    def __init__(self, overlap, lhs, rhs):
        self.overlap = overlap
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"inconsistent overlap {overlap}: {lhs} != {rhs}")


class GroupSizeError(PschurError):
    """Requested enumeration exceeds the configured cap."""


class PreconditionError(PschurError, ValueError):
    """An engine was called outside its documented regime."""


class ParameterError(PschurError, ValueError):
    """Invalid catalog parameters (wrong prime, residue where a nonresidue is needed, ...)."""


class InternalError(PschurError, RuntimeError):
    """A self-check inside an engine failed; indicates a bug, never bad input."""


class ForeignTorsionError(InternalError):
    """An elementary divisor that is not a power of the working prime."""
