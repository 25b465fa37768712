"""Error hierarchy shared by all packages.

Every message starts with a bracketed subsystem tag, e.g. ``[GROEBNER]``.
"""

from typing import Iterable, Optional


class BlowupError(RuntimeError):
    """Base class for failures raised by the toolkit."""


class ResourceLimitError(BlowupError):
    """A configured term or iteration cap was exceeded."""


class InconclusiveError(BlowupError):
    """A colimit or saturation did not stabilize within the configured cap."""


class OrderMismatchError(BlowupError, ValueError):
    """Vectors and basis belong to different rings, ranks or monomial orders."""


class UnboundedPieceError(BlowupError):
    """A graded piece is not finitely generated over the base."""


class MalformedFiltrationError(BlowupError, ValueError):
    """A filtration violates I·F^n ⊆ F^{n+1} or is not decreasing."""


class NotFreeError(BlowupError, ValueError):
    """An operation defined on free modules received something else."""


class GradingError(BlowupError, ValueError):
    """Inhomogeneous data or incompatible twists."""


class ParseError(BlowupError, ValueError):
    """Problem text could not be parsed.

    Args:
        message: what went wrong.
        line: 1-based line of the offending token.
        column: 1-based column of the offending token.
        expected: token kinds that would have been accepted.
    """

    def __init__(self, message: str, line: int, column: int, expected: Optional[Iterable[str]] = None):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected or ())))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"[PARSE] line {line}, column {column}: {message}{detail}")
