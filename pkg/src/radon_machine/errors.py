"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError family is exit code 2,
DataError family is exit code 3.
"""


class ConfigError(ValueError):
    """Invalid parameters, dimensions, or experiment configuration."""


class ShapeError(ConfigError):
    """Mismatched array shapes or dimensions."""


class DataError(ValueError):
    """Bad, malformed, or insufficient input data."""


class ParseError(DataError):
    """A data file failed to parse; message carries the line number."""


class DegenerateSetError(DataError):
    """No usable non-zero coefficient vector exists for a point set."""
