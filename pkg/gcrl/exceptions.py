"""Exception classes for the gcrl package."""

from typing import Any, Dict, Optional, Sequence


class GcrlError(Exception):
    """Base exception class for gcrl."""
    pass


class ShapeError(GcrlError):
    """Raised when an array does not have the expected shape or length."""
    pass


class UsageError(GcrlError):
    """Raised when an API is called in the wrong order or context."""
    pass


class NumericError(GcrlError):
    """Raised when a computation produces NaN or Inf."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ConfigError(GcrlError):
    """Raised when a configuration is invalid."""
    pass


class UnknownKeyError(ConfigError):
    """Raised when a replace-mode override targets a key that does not exist."""
    pass


class DuplicateKeyError(ConfigError):
    """Raised when an add-mode override targets a key that already exists."""
    pass


class UnknownComponentError(ConfigError):
    """Raised when an algorithm or environment name is not known."""

    def __init__(self, kind: str, name: str, choices: Sequence[str]):
        self.kind = kind
        self.name = name
        self.choices = list(choices)
        super().__init__(
            f"Unknown {kind} '{name}'. Valid choices: {', '.join(self.choices)}"
        )


class ConfigParseError(ConfigError):
    """Raised when a configuration file cannot be parsed."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        location = ""
        if path:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
            location += ": "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line = line


class StateError(GcrlError):
    """Raised when an operation is not valid in the current state."""
    pass


class NotFoundError(GcrlError):
    """Raised when a run, trial or file cannot be found."""
    pass


class OrderingError(GcrlError):
    """Raised when live frames are emitted out of step order."""
    pass


class TrialPruned(GcrlError):
    """Raised by a trial launcher to mark its trial as pruned."""
    pass


class UnknownMetricError(ConfigError):
    """Raised when a requested metric is not present in a live stream."""

    def __init__(self, names: Sequence[str], available: Sequence[str]):
        self.names = list(names)
        self.available = list(available)
        super().__init__(
            f"Unknown metric(s) {', '.join(self.names)}. Available: {', '.join(self.available)}"
        )
