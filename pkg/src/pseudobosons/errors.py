"""Exception hierarchy shared by all modules."""


class PseudoBosonError(Exception):
    """Base class for every error raised by this package."""


class NonFinite(PseudoBosonError, ValueError):
    pass


class DegreeCapExceeded(PseudoBosonError, ValueError):
    pass


class NotIntegrable(PseudoBosonError, ValueError):
    """The real part of the quadratic form is not positive definite."""


class IndexOutOfRange(PseudoBosonError, IndexError):
    pass


class InvalidParams(PseudoBosonError, ValueError):
    pass


class UnsupportedCouplings(PseudoBosonError, ValueError):
    pass


class TruncationTooLarge(PseudoBosonError, ValueError):
    pass


class GridTooCoarse(PseudoBosonError, RuntimeError):
    pass


class ConstraintNotSatisfied(PseudoBosonError, ValueError):
    pass


class ConfigError(PseudoBosonError, ValueError):
    pass
