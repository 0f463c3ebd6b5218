"""Shared error types."""


class WorkLimitExceeded(RuntimeError):
    """An enumeration or iteration hit its node or bit-size cap."""

    def __init__(self, message: str, nodes=None, bits=None):
        super().__init__(message)
        self.nodes = nodes
        self.bits = bits


class ConfigError(ValueError):
    """Invalid experiment configuration."""
