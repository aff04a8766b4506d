"""Exception types raised by the engine."""


class WZSError(Exception):
    """Base class for all engine errors."""


class NonUnitScalar(WZSError):
    pass


class CardinalityOverflow(WZSError):
    pass


class EmptySequence(WZSError):
    pass


class BadConstraint(WZSError):
    pass


class BudgetExceeded(WZSError):
    pass


class CapTooSmall(WZSError):
    pass


class SearchIncomplete(WZSError):
    """Search hit its cap; ``certificate`` holds the best lower bound found."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class InputNotFree(WZSError):
    pass


class PreconditionViolated(WZSError):
    pass


class InternalProofViolation(WZSError):
    """A constructive proof step failed. This must never happen."""


class Overflow(WZSError):
    pass
