"""Exception hierarchy.

``DataError`` subclasses describe bad input; the CLI maps them to exit
status 2. ``ExhaustionError`` (exit status 3) is raised when a sampler
would delete every majority instance.
"""


class MGRUError(Exception):
    """Base class for all errors raised by this package."""


class DataError(MGRUError, ValueError):
    """Input data violates a dataset invariant."""


class ParseError(DataError):
    """Malformed row, non-numeric feature or unsupported file layout."""


class LabelError(DataError):
    """Label column is missing or does not define a binary problem."""


class EmptyClassError(DataError):
    """One of the two classes has no instances."""


class FoldError(DataError):
    """Requested fold count cannot be stratified."""


class DegenerateError(DataError):
    """Too few instances to estimate distance statistics."""


class ExhaustionError(MGRUError):
    """Sampling would remove every majority instance."""
