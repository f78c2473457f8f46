"""Exception hierarchy shared by all modules."""


class MDLCauseError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(MDLCauseError, ValueError):
    pass


class ContractViolation(MDLCauseError, AssertionError):
    """An internal precondition was broken by the caller (e.g. a stale binning)."""


class PairedDataError(MDLCauseError, ValueError):
    pass


class DegenerateColumnError(MDLCauseError, ValueError):
    """A column has no spread and cannot be rescaled."""


class EncodingError(MDLCauseError, ValueError):
    pass


class ParseError(MDLCauseError, ValueError):
    pass


class FetchError(MDLCauseError, OSError):
    pass
