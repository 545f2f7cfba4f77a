"""Shared exception types."""


class ConfigError(ValueError):
    """A configuration value is missing, malformed or out of range."""
