"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class SubcountError(Exception):
    exit_code = 2


class UsageError(SubcountError):
    exit_code = 1


class GraphFormatError(SubcountError, ValueError):
    """Malformed edge-list or degree-distribution input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyGraphError(SubcountError, ValueError):
    pass


class PatternError(SubcountError, ValueError):
    pass


class CapabilityError(SubcountError):
    pass


class ParameterError(SubcountError, ValueError):
    pass


class SamplerError(SubcountError, ValueError):
    pass


class CountOverflowError(SubcountError, OverflowError):
    exit_code = 4


class VerificationFailure(SubcountError):
    exit_code = 3
