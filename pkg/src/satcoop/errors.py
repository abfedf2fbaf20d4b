from typing import Iterable


class SatCoopError(Exception):
    """Base class for every error raised by the simulator."""


class ConfigError(SatCoopError):
    def __init__(self, messages: Iterable[str]):
        self.messages = list(messages)
        super().__init__("\n".join(self.messages))


class DomainError(SatCoopError, ValueError):
    """A physical or numerical input outside the domain of an operation."""


class NoVisibleSatelliteError(SatCoopError):
    pass


class SingularSystemError(SatCoopError, ValueError):
    pass
