"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class MiamixError(Exception):
    """Base class for all errors raised by this package."""


class ArgumentError(MiamixError, ValueError):
    """An operation was called with arguments violating its contract."""


class ConfigError(ArgumentError):
    """An engine configuration value is outside its allowed range."""


class DataError(MiamixError):
    """Input data (manifest line, image file) could not be parsed or decoded."""


class InvariantError(MiamixError):
    """An internal consistency check failed; indicates a bug, not bad input."""
