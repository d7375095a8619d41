"""Exception hierarchy.

Input problems (bad rows, bad parameter files) derive from
:class:`InputError`; numeric degeneracies (flat posteriors, rank-deficient
designs) derive from :class:`NumericError`.  The CLI maps the first family
to exit code 1 and the second to exit code 2.
"""


class IntroscoreError(Exception):
    """Base class for all package errors."""


class InputError(IntroscoreError, ValueError):
    """Invalid input data or parameters."""


class NumericError(IntroscoreError, ArithmeticError):
    """A computation is undefined or numerically degenerate."""


class MapUndefinedError(NumericError):
    """The posterior is flat on [0, 1], so no unique MAP exists."""


class CalibrationError(NumericError):
    """A calibration problem is underdetermined or degenerate."""
