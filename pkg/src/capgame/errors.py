"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: ProblemFormatError -> 2,
ComputationError -> 3, PreconditionError -> 4.
"""


class CapgameError(Exception):
    """Base class for all errors raised by this package."""


class ProblemFormatError(CapgameError):
    """A problem document is malformed or violates a structural invariant."""


class PreconditionError(CapgameError, ValueError):
    """An operation was called outside its stated domain of validity."""


class ComputationError(CapgameError, RuntimeError):
    """A computation failed internally (should not happen on valid input)."""
