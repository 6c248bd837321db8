"""Exception types shared across boxspec."""


class BoxspecError(Exception):
    """Base class; carries the CLI exit code for the error family."""

    exit_code = 2

    def __init__(self, message, pointer=None):
        super().__init__(message)
        self.message = message
        self.pointer = pointer


class ConfigError(BoxspecError, ValueError):
    """Invalid configuration or input document (``pointer`` is a JSON pointer)."""


class EnvelopeError(BoxspecError, ValueError):
    """Request outside the declared accuracy envelope of a numerical kernel."""


class AmbiguousKernelError(BoxspecError, ValueError):
    pass


class MultiplicityUnavailableError(BoxspecError, ValueError):
    """Multiplicity-dependent operation requested on set-only (non pure point) data."""


class UnavailableError(BoxspecError):
    exit_code = 4


class VerificationError(BoxspecError):
    exit_code = 3
