class BellframeError(Exception):
    """Base class for every error raised by the simulator."""


class DomainError(BellframeError, ValueError):
    """An argument lies outside the range the model is defined on."""


class GridRangeError(BellframeError, IndexError):
    """A cumulative index asks for φ rows the curve does not contain."""


class InsufficientDataError(BellframeError, ValueError):
    """Estimation was attempted on a record with no coincidences."""


class ContractError(BellframeError, TypeError):
    """A result is missing a field the caller relies on (e.g. sigma)."""
