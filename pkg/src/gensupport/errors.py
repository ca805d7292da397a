"""Exception hierarchy shared by the kernel modules."""


class GenSupportError(Exception):
    """Base class for every error raised by this package."""


class ContractViolation(GenSupportError, ValueError):
    """An operation was called outside its precondition (length mismatch, bad index...)."""


class ConfigurationError(GenSupportError, KeyError):
    """A signature does not cover a variable that the caller asked about."""

    def __str__(self):
        return Exception.__str__(self)


class EnumerationLimitError(GenSupportError, RuntimeError):
    """An exhaustive enumeration would exceed its configured bound."""


class ParseError(GenSupportError, ValueError):
    """Malformed instance file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
