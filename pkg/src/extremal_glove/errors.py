"""Exception types shared across the package.

Every error carries an ``exit_code`` used by the command line front end:
1 = usage error, 2 = data error, 3 = numerical failure.
"""


class ExtremalGloveError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class UsageError(ExtremalGloveError):
    """Invalid flag combination or parameter value."""

    exit_code = 1


class ParseError(ExtremalGloveError):
    """Malformed input file; message includes the offending line number."""


class EmptyVocabError(ExtremalGloveError):
    """An operation that needs at least one vocabulary entry got none."""


class InsufficientSampleError(ExtremalGloveError):
    """Sample too small for the requested number of order statistics."""


class DegenerateSampleError(ExtremalGloveError):
    """Estimator formula undefined on this sample (ties, zero moments)."""

    exit_code = 3


class NonPositiveInputError(ExtremalGloveError):
    """A value that must be strictly positive was zero or negative."""


class OutOfRangeError(ExtremalGloveError):
    """A value exceeded its permitted range (e.g. count above the cap)."""


class SizeMismatchError(ExtremalGloveError):
    """Two containers that must agree in size do not."""


class OOVWordError(ExtremalGloveError):
    """An analogy query word is not in the vocabulary."""


class NonFiniteLossError(ExtremalGloveError):
    """Training or gradient evaluation produced NaN or infinity."""

    exit_code = 3
