"""Exception types shared across the package."""


class DirtyEncodeError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigError(DirtyEncodeError, ValueError):
    """Invalid configuration, arguments or encoder specification."""

    exit_code = 2


class DataError(DirtyEncodeError, ValueError):
    """Input data cannot be used as requested."""

    exit_code = 3
