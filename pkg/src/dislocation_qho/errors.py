"""Exception hierarchy.

Every error carries a short ``code`` used by the command line tool when it
marks a failed row as ``ERR:<code>``.
"""


class DislocationQHOError(ValueError):
    code = "Error"


class OutOfRangeBeta(DislocationQHOError):
    code = "OutOfRangeBeta"


class NonPositiveMass(DislocationQHOError):
    code = "NonPositiveMass"


class InvalidQuantumNumber(DislocationQHOError):
    code = "InvalidQuantumNumber"


class InternalInconsistency(DislocationQHOError):
    """Two routes to the same quantity disagreed; indicates a bug."""

    code = "InternalInconsistency"


class ConvergenceFailure(DislocationQHOError):
    code = "ConvergenceFailure"


class DomainError(DislocationQHOError):
    code = "DomainError"


class UnphysicalFrequency(DislocationQHOError):
    code = "UnphysicalFrequency"


class UnsupportedOrder(DislocationQHOError):
    code = "UnsupportedOrder"


class SingularParameter(DislocationQHOError):
    code = "SingularParameter"


class DegenerateState(DislocationQHOError):
    code = "DegenerateState"


class RootMismatch(DislocationQHOError):
    code = "RootMismatch"


class NoPhysicalRoot(DislocationQHOError):
    code = "NoPhysicalRoot"


class SingularSample(DislocationQHOError):
    code = "SingularSample"


class NoSignChange(DislocationQHOError):
    code = "NoSignChange"
