"""Exception hierarchy shared by the library and the command line."""


class EmbCalcError(ValueError):
    """Base class for every error raised by embcalc."""


class InvalidArgument(EmbCalcError):
    pass


class PreconditionViolation(EmbCalcError):
    """An estimate was requested outside the hypotheses it is proved under."""


class UnsupportedRange(EmbCalcError):
    """Dimensions outside the range where a formula is known to hold."""
