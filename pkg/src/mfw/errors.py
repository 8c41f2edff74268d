"""Exception types shared across the package."""


class MFWError(Exception):
    """Base class for mathematical failures (CLI exit status 1)."""


class PreconditionError(MFWError, ValueError):
    pass


class RingMismatch(MFWError, ValueError):
    pass


class BudgetExceeded(MFWError):
    """A step or degree cap was hit; no answer is returned."""


class NotMember(MFWError):
    pass


class CertificateUnavailable(MFWError):
    pass


class NotIsolated(MFWError):
    pass


class NonIntegerEuler(MFWError):
    pass


class NotStabilized(MFWError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotFiniteWithinBound(MFWError):
    def __init__(self, message, growth=()):
        super().__init__(message)
        self.growth = tuple(growth)


class NonIntegral(MFWError):
    pass
