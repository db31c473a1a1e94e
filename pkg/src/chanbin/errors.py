"""Exception hierarchy."""


class ChanbinError(Exception):
    """Base class for all errors raised by chanbin."""


class UnsupportedFormat(ChanbinError, ValueError):
    pass


class CorruptData(ChanbinError, ValueError):
    pass


class InvalidSpec(ChanbinError, ValueError):
    pass


class EmptyReport(ChanbinError, ValueError):
    pass


class OutOfRange(ChanbinError, ValueError):
    pass


class EmptyWorkingSet(ChanbinError, ValueError):
    pass


class NonPositiveRho(ChanbinError, ValueError):
    pass


class RecursionLimitExceeded(ChanbinError, RuntimeError):
    """Binning recursed deeper than the configured limit (indicates a bug)."""


class EmptyInput(ChanbinError, ValueError):
    pass


class TooManyColors(ChanbinError, ValueError):
    pass


class ChannelMismatch(ChanbinError, ValueError):
    pass


class MissingChannel(ChanbinError, ValueError):
    pass


class KTooLarge(ChanbinError, ValueError):
    pass
