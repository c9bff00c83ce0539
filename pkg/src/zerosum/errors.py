class ZeroSumError(Exception):
    """Base class for all package errors."""


class InvalidFactor(ZeroSumError, ValueError):
    pass


class IncompatibleElement(ZeroSumError, ValueError):
    pass


class GroupTooLarge(ZeroSumError):
    pass


class SymmetryDisabled(ZeroSumError):
    """Raised when a group is above the symmetry cap; callers fall back to identity-only pruning."""


class InvalidSpec(ZeroSumError, ValueError):
    pass


class LengthCapExceeded(ZeroSumError):
    pass


class InvalidIndex(ZeroSumError, ValueError):
    pass


class BudgetExceeded(ZeroSumError):
    pass
