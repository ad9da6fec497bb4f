"""Exception hierarchy.

Every error raised on purpose by the library derives from GirthforgeError so
the CLI can map it to an exit code.
"""


class GirthforgeError(Exception):
    exit_code = 1


class ValidationError(GirthforgeError, ValueError):
    exit_code = 1


class NotPrimePower(ValidationError):
    pass


class OutOfRange(ValidationError):
    pass


class DivisionByZero(GirthforgeError, ZeroDivisionError):
    exit_code = 1


class DimensionMismatch(ValidationError):
    pass


class BadParameters(ValidationError):
    pass


class NoPerfectMatching(ValidationError):
    pass


class NotAMatchingOrdering(ValidationError):
    pass


class DualityNotVerified(ValidationError):
    pass


class TauParity(ValidationError):
    pass


class SpecValidation(ValidationError):
    pass


class SelfDualityRequired(SpecValidation):
    pass


class NoSuchEntry(ValidationError):
    pass


class WrongFieldCharacteristic(ValidationError):
    pass


class ResourceLimit(GirthforgeError):
    exit_code = 2


class BudgetExceeded(ResourceLimit):
    """A search ran out of node budget before reaching a conclusion."""


class GraphParseError(GirthforgeError):
    exit_code = 4
