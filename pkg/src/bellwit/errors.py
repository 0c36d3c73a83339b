"""Exception hierarchy shared by all bellwit modules."""


class BellwitError(Exception):
    """Base class for domain errors (CLI maps these to exit status 1)."""


class InvalidParameterError(BellwitError, ValueError):
    pass


class UnsupportedFamilyError(BellwitError):
    """Operation requires a family-specific closed form the tensor lacks."""


class NotAvailableError(BellwitError):
    """No closed form exists for this tensor (e.g. parity with m not a power of 2)."""


class BudgetExceededError(BellwitError):
    pass


class NotModifiedCirculantError(BellwitError, ValueError):
    pass


class DimensionMismatchError(BellwitError, ValueError):
    pass


class InvalidStateError(BellwitError, ValueError):
    pass


class InvalidDataError(BellwitError, ValueError):
    pass
