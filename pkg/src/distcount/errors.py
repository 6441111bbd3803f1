"""Exception types shared across the package."""


class DistError(Exception):
    """Base class for all errors raised by distcount."""


class GraphFormatError(DistError, ValueError):
    """Malformed edge-list or graph6 input."""


class InvariantViolation(DistError, RuntimeError):
    """An internal consistency check failed; indicates a bug."""


class CapExceeded(DistError, RuntimeError):
    """A configured safety cap was exceeded."""

    def __init__(self, what: str, cap: int):
        super().__init__(f"{what} exceeds cap {cap}")
        self.what = what
        self.cap = cap


class NotConnectedError(DistError, ValueError):
    pass


class NotBiconnectedError(DistError, ValueError):
    pass
