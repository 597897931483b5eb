"""Exception types shared across the package."""

from __future__ import annotations


class LineModuliError(Exception):
    """Base class for all package errors."""


class ParseError(LineModuliError):
    """An expression string failed to tokenize or parse."""


class GuardExceeded(LineModuliError):
    """An enumeration or search exceeded its configured guard limit."""


class UnclassifiedFamily(LineModuliError):
    """A solution family with free coordinates could not be classified:
    every sampled member violated an inequation, so the family needs a
    case split on that inequation's components.

    Attributes:
        indexes: positions of the violated inequation tuples.
    """

    def __init__(self, message: str, indexes: frozenset[int] = frozenset()):
        super().__init__(message)
        self.indexes = indexes


class InvalidArrangement(LineModuliError):
    """An explicit arrangement failed validation (too few lines, or two
    lines are proportional)."""


class InvalidIncidenceSpec(LineModuliError):
    """An abstract incidence specification failed validation (point with
    fewer than three lines, two points sharing two lines, or an index out
    of range)."""


class CoincidentLines(LineModuliError):
    """meet() was called on two proportional lines."""


class CoincidentPoints(LineModuliError):
    """join() was called on two proportional points."""


class SingularTransform(LineModuliError):
    """A projective transform had vanishing determinant."""


class NoPencilPair(LineModuliError):
    """Normalization needs two distinct multiple points whose pencils pin a
    projective frame; the specification does not provide them."""


class OddNonrealCount(LineModuliError):
    """A branch reported an odd number of nonreal embeddings, which cannot
    happen for a real polynomial; the input data is inconsistent."""


class NonRealRoot(LineModuliError):
    """A rendering operation asked for a real branch value that does not
    exist."""


class UnboundedWindow(LineModuliError):
    """A rendering window is empty or infinite."""


class MalformedCaseFile(LineModuliError):
    """A casebook record failed schema validation.

    Attributes:
        path: file the record came from, if known.
        field: dotted path of the offending field, if known.
    """

    def __init__(self, message: str, path: str | None = None, field: str | None = None):
        detail = message
        if path is not None:
            detail = f"{path}: {detail}"
        if field is not None:
            detail = f"{detail} (field {field})"
        super().__init__(detail)
        self.path = path
        self.field = field
