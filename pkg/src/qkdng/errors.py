"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ConfigurationError(ValueError):
    """Mutually incompatible or unsupported settings were combined."""


class TruncationError(ValueError):
    """A truncation policy cannot reach its own tail tolerance."""

    def __init__(self, message: str, achieved_tail: float):
        super().__init__(message)
        self.achieved_tail = achieved_tail
