"""Exception types shared across the package."""


class BalcrownError(Exception):
    """Base class for all package errors."""


class DisconnectedInput(BalcrownError):
    pass


class InvalidArc(BalcrownError):
    pass


class InfeasibleDemand(BalcrownError):
    pass


class IsolatedBVertex(BalcrownError):
    pass


class QBelowMaxWeight(BalcrownError):
    pass


class NotBiconnected(BalcrownError):
    pass


class NotAnEdge(BalcrownError):
    pass


class PreconditionViolated(BalcrownError):
    pass


class SmallComponent(BalcrownError):
    pass


class LambdaNonPositive(BalcrownError):
    pass


class NotFullyBalanced(BalcrownError):
    pass


class InvalidParams(BalcrownError):
    pass


class Infeasible(BalcrownError):
    pass


class BudgetExceeded(BalcrownError):
    pass


class UnknownClaimKind(BalcrownError):
    pass


class GraphFormatError(BalcrownError):
    """Raised by the parser; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class GraphSyntaxError(GraphFormatError):
    pass


class DuplicateEdge(GraphFormatError):
    pass


class BadWeight(GraphFormatError):
    pass


class CountMismatch(GraphFormatError):
    pass
