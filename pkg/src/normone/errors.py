"""Exception types shared across the package."""


class NormOneError(Exception):
    """Base class for every error raised by normone."""


class InvalidInput(NormOneError, ValueError):
    pass


class ConfigError(InvalidInput):
    """A field configuration failed to parse or violates an invariant.

    ``invariant`` names the violated check so callers (and the CLI) can
    report it without parsing the message.
    """

    def __init__(self, message: str, invariant: str = "schema"):
        super().__init__(message)
        self.invariant = invariant


class PrecisionError(NormOneError, ArithmeticError):
    """A rounding decision fell inside the guard band at the working precision.

    Retry with ``precision`` bits or more.
    """

    def __init__(self, message: str, precision: int):
        super().__init__(message)
        self.precision = precision


class NotNormOneError(NormOneError, ValueError):
    pass


class ResourceError(NormOneError, MemoryError):
    def __init__(self, message: str, box_volume: int):
        super().__init__(message)
        self.box_volume = box_volume
