"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class UrsaError(Exception):
    """Base class for all library errors."""


class ValidationError(UrsaError, ValueError):
    """An input violates a documented invariant."""


class DimMismatch(ValidationError):
    pass


class NonConvergence(UrsaError, ArithmeticError):
    pass


class MaximallyMixedState(ValidationError):
    pass


class NotFaithful(ValidationError):
    pass


class ZeroScale(ValidationError):
    pass


class PurityOutOfRange(ValidationError):
    pass


class NonUnitVector(ValidationError):
    pass


class BadSpectrum(ValidationError):
    pass


class RangeError(ValidationError):
    pass


class ParseError(UrsaError):
    """A file could not be decoded into the expected JSON schema."""
