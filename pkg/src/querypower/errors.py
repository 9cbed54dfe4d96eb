"""Exception hierarchy shared across the package."""


class QueryPowerError(Exception):
    """Base class for all errors raised by this package."""


class GameError(QueryPowerError):
    """Illegal game construction or a model-violating operation."""


class CapacityError(GameError):
    """An operation needs full coalition enumeration beyond the configured bound."""


class DimensionMismatch(QueryPowerError):
    """Player counts of two objects (game, rescaling row, ...) do not agree."""


class RescalingError(QueryPowerError):
    """An array does not define an admissible rescaling row."""


class NormalizationUndefined(QueryPowerError):
    """Requested a normalized value for a row whose normalizing constant is zero."""


class AllZeroError(QueryPowerError):
    """No player ever swings, so proposer probabilities are undefined."""


class FormatError(QueryPowerError):
    """A game, rescaling or report document could not be parsed."""
