"""Shared exception hierarchy.

Every domain error raised by this package derives from ChainlineError so the
CLI can map them to a single exit code.
"""


class ChainlineError(Exception):
    """Base class for all domain errors."""


class ParseError(ChainlineError):
    """Feature-model source rejected, with position information."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class BoundExceededError(ChainlineError):
    """Model too large for exhaustive enumeration."""


class VoidModelError(ChainlineError):
    """No configuration can satisfy the model."""


class DecisionError(ChainlineError):
    """A decide/undo call that is illegal regardless of constraint state."""


class ModelError(ChainlineError):
    """Feature model structurally unusable for the requested operation."""


class FinalizeError(ChainlineError):
    """Auto-completion could not reach a complete valid configuration."""

    def __init__(self, message: str, blocking_feature: str | None = None):
        super().__init__(message)
        self.blocking_feature = blocking_feature


class ConfigFileError(ChainlineError):
    """Configuration file malformed or referencing unknown features."""


class TemplateError(ChainlineError):
    """Template source rejected."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class GenerationError(ChainlineError):
    """Product generation precondition or rendering failure."""


class CostError(ChainlineError):
    """Invalid cost-model input."""
