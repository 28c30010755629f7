"""Exception hierarchy shared by the model and the command-line frontend."""


class DomainError(ValueError):
    """A parameter lies outside the domain where the model is defined."""


class AboveThresholdError(DomainError):
    """Pump power at or above the oscillation threshold."""


class CalibrationError(ValueError):
    """QNL calibration preconditions not met (power or metadata mismatch)."""


class TraceFormatError(ValueError):
    """Malformed trace or table file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(ValueError):
    """Malformed or unknown configuration entry."""

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
