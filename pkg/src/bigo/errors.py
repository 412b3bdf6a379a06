"""Exception hierarchy shared by the decision procedure and its frontends."""


class BigOError(Exception):
    """Base class for every error raised by this package."""


class NonLinearNode(BigOError):
    """A min/max/abs node reached a routine that only accepts linear terms."""


class UnsupportedBound(BigOError):
    """A bound in the nonnegative core carries a negative coefficient."""


class DimensionMismatch(BigOError):
    pass


class IndexOutOfRange(BigOError):
    pass


class InternalInvariantViolation(BigOError):
    """A witness that the theory guarantees could not be produced."""


class ChainInvariantViolation(InternalInvariantViolation):
    """The nested bound sets of a growth counterexample are inconsistent."""


class BasisMismatch(BigOError):
    pass


class SingularSystem(BigOError):
    pass


class UnboundAtom(BigOError):
    pass


class UnsupportedConnective(BigOError):
    pass


class ProblemError(BigOError):
    """Malformed problem text. Carries a 1-based line and column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ProblemSyntaxError(ProblemError):
    pass


class UnknownTheory(ProblemError):
    pass


class GrowthIndexOutOfOrder(ProblemError):
    pass
