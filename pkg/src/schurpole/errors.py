"""Exception types shared across the package."""

from __future__ import annotations


class SchurPoleError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SchurPoleError):
    """Malformed problem or solution file.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateStepError(SchurPoleError):
    """An assignment step hit a rank/feasibility condition that must hold
    for S-controllable inputs.  Raised instead of silently producing a
    meaningless factor column."""


class SingularPencilError(SchurPoleError):
    """det(A - lambda*E) vanishes identically; the pencil has no spectrum."""
