"""Exception hierarchy.

Everything derives from :class:`ValueError` so callers that only care about
"bad input" can catch one type; the CLI maps the subclasses to exit codes.
"""


class ModelDomainError(ValueError):
    """Random-model parameters fall outside the admissible domain (e.g. p > 1)."""


class GraphFormatError(ValueError):
    """A graph or matching file could not be parsed."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class MatchingError(ValueError):
    """A matching or alternating cycle is inconsistent with its graph."""


class SizeCapError(ValueError):
    """An exact oracle was asked to handle an instance above its size cap."""
