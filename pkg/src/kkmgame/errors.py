"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so keep the classes narrow.
"""


class KkmGameError(Exception):
    """Base class for all errors raised by this package."""


class InputError(KkmGameError, ValueError):
    """Malformed or inconsistent input (bad label, ragged tensor, ...)."""


class PreconditionError(KkmGameError):
    """An operation was called outside its domain of validity."""


class CapError(KkmGameError):
    """An exhaustive enumeration would exceed its configured size cap."""

    def __init__(self, message, size=None, cap=None):
        super().__init__(message)
        self.size = size
        self.cap = cap


class HypothesisFailure(KkmGameError):
    """Existence-theorem hypotheses do not hold; ``report`` has the evidence."""

    def __init__(self, message, report=None, condition=None):
        super().__init__(message)
        self.report = report
        self.condition = condition


class TheoremViolation(KkmGameError):
    """Verified hypotheses but no conclusion witness: indicates a bug."""
