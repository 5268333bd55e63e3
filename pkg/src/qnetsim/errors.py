"""Exception types raised across the package."""


class InvalidParameterError(ValueError):
    """A numeric argument is outside the domain of the operation."""


class DegenerateInputError(ValueError):
    """The input graph or statistic is too small for the quantity to be defined."""


class NoPeakError(ValueError):
    """The isolated-cluster curve never rises above zero on the sampled grid."""


class MissingColumnError(KeyError):
    """A results table lacks a column needed by a post-processing step."""


class ConfigError(ValueError):
    """Raised by the configuration parser.

    ``kind`` is one of ``not-found``, ``malformed``, ``unknown-key`` or
    ``constraint-violation``; ``where`` names the file, line or field.
    """

    def __init__(self, kind, message, where=None):
        self.kind = kind
        self.where = where
        text = f"{kind}: {message}"
        if where:
            text = f"{text} ({where})"
        super().__init__(text)
