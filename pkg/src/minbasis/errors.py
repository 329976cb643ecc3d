"""Exception hierarchy. Every error carries a short machine code."""


class MinbasisError(Exception):
    code = "ERROR"

    def __init__(self, message=""):
        super().__init__(message)
        self.message = message

    def __str__(self):
        return f"{self.code}: {self.message}" if self.message else self.code


class SpecRejected(MinbasisError, ValueError):
    code = "REJECTED"


class BadParam(MinbasisError, ValueError):
    code = "BAD-PARAM"


class WrongArity(MinbasisError, ValueError):
    code = "WRONG-ARITY"


class ZeroNotInW1(MinbasisError, ValueError):
    code = "ZERO-NOT-IN-W1"


class EmptySupport(MinbasisError, ValueError):
    code = "EMPTY-SUPPORT"


class NonPositive(MinbasisError, ValueError):
    code = "NONPOSITIVE"


class CapExceeded(MinbasisError):
    code = "CAP-EXCEEDED"


class PreconditionViolated(MinbasisError, ValueError):
    code = "PRECONDITION-VIOLATED"


class Infeasible(MinbasisError, RuntimeError):
    """Raised only if the decomposition search gets stuck; indicates a bug."""

    code = "INFEASIBLE"


class NotABasisElement(MinbasisError, ValueError):
    code = "NOT-A-BASIS-ELEMENT"


class TTooSmall(MinbasisError, ValueError):
    code = "T-TOO-SMALL"


class ConditionUnavailable(MinbasisError):
    code = "CONDITION-UNAVAILABLE"


class SpaceTooLarge(MinbasisError):
    code = "SPACE-TOO-LARGE"
