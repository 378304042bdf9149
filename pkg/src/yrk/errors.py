"""Exception hierarchy shared across the package."""


class YRKError(Exception):
    """Base class for all package errors."""


class BackendMismatchError(YRKError, TypeError):
    """Exact and floating scalars were combined in one expression."""


class MathDomainError(YRKError, ArithmeticError):
    """A mathematical precondition failed (pole collision, singular solve, ...)."""


class PoleCollisionError(MathDomainError):
    pass


class SingularSystemError(MathDomainError):
    pass


class RootFindingError(MathDomainError):
    pass


class SchemaError(YRKError, ValueError):
    """Malformed JSON input or CLI argument."""
