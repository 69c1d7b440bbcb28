"""Exception hierarchy shared by the library and the command line."""


class QGraphError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(QGraphError, ValueError):
    """Invalid graph data or an unsupported family request."""


class EdgeListParseError(GraphError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class SpectrumValidationError(QGraphError, ValueError):
    """A supplied spectrum does not annihilate the matrix."""


class HypothesisError(QGraphError, ValueError):
    """Inputs do not meet the preconditions of a structural result."""


class InvariantViolation(QGraphError, AssertionError):
    """A numerical self-check failed; results cannot be trusted."""
