"""Exception hierarchy shared by every module."""


class SaitoHodgeError(Exception):
    """Base class for all library errors."""


class NotAUnit(SaitoHodgeError, ArithmeticError):
    """A determinant (or divisor) is not of the form c * Q^k."""


class UnknownType(SaitoHodgeError, KeyError):
    pass


class ParseError(SaitoHodgeError, ValueError):
    """Malformed input text; carries a 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class DomainError(SaitoHodgeError, ValueError):
    """A well-formed expression whose value lies outside the supported domains."""


class ValidationError(SaitoHodgeError, ValueError):
    """A Coxeter datum violates one of its structural invariants."""


class GroupTooLarge(SaitoHodgeError, RuntimeError):
    pass


class StructureViolation(SaitoHodgeError, AssertionError):
    """A structural property that must hold for a valid datum failed."""


class CrossCheckFailure(StructureViolation):
    """Two independent computation routes disagree."""


class IdentityViolation(StructureViolation):
    pass


class PreconditionViolated(SaitoHodgeError, ValueError):
    pass


class NotInvariant(SaitoHodgeError, ValueError):
    pass


class NotLogarithmic(SaitoHodgeError, ValueError):
    pass


class Inconsistent(SaitoHodgeError, ValueError):
    """A graded linear solve has no solution."""


class NormalizationMismatch(SaitoHodgeError, ValueError):
    pass


class CounterexampleFound(SaitoHodgeError, AssertionError):
    pass
