"""Exception hierarchy shared by every module of the package."""


class WaringError(Exception):
    """Base class for all errors raised by quadwaring."""


class InvalidArgument(WaringError, ValueError):
    pass


class DivisionByZero(WaringError, ZeroDivisionError):
    pass


class ContractViolation(WaringError, AssertionError):
    """An internal invariant that the algorithms rely on did not hold."""


class SingularBlock(WaringError, ArithmeticError):
    """A diagonal block of a block-triangular system has zero determinant.

    ``block`` is the label of the offending block (the form arity ``k``
    when raised from the ansatz solver).
    """

    def __init__(self, block, message=None):
        self.block = block
        super().__init__(message or f"diagonal block {block} is singular")


class InconsistentSystem(WaringError, ArithmeticError):
    def __init__(self, rank, augmented_rank):
        self.rank = rank
        self.augmented_rank = augmented_rank
        super().__init__(
            f"system has no solution: rank {rank} < augmented rank {augmented_rank}"
        )


class RetryExhausted(WaringError, RuntimeError):
    pass


class UnknownBuiltin(WaringError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown builtin"


class DomainError(WaringError, ValueError):
    pass


class SizeCapExceeded(WaringError, ValueError):
    pass


class InvalidTolerance(WaringError, ValueError):
    pass


class ParseError(WaringError, ValueError):
    """Malformed certificate. Carries the 1-based line/column of the problem."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class VersionUnsupported(WaringError, ValueError):
    pass
