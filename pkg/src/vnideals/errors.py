"""Exception hierarchy."""


class VNIdealsError(Exception):
    pass


class ShapeError(VNIdealsError, ValueError):
    pass


class PreconditionError(VNIdealsError, ValueError):
    """An operation's input contract does not hold.

    ``report`` carries the failing :class:`~vnideals.families.CheckReport`
    when the precondition was itself a verification step.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotUnitarilyEquivalent(PreconditionError):
    pass


class DegenerateInputError(PreconditionError):
    pass


class AlgebraMismatchError(VNIdealsError, ValueError):
    pass


class EvaluationDomainError(VNIdealsError, KeyError):
    pass


class IntegrityError(VNIdealsError, RuntimeError):
    pass
