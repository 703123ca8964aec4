"""Exception hierarchy.

Two public classes of failure: bad input (rejected up front or at a
precondition) and violated internal invariants (an engine bug, or an input
that slipped past validation).  The CLI maps them to exit codes 1 and 2.
"""


class ToricMmpError(Exception):
    """Base class for all package errors."""


class InvalidInputError(ToricMmpError):
    """Input violates a schema or an operation precondition."""


class NotKEquivalentError(InvalidInputError):
    """The two pairs are not K-equivalent; carries a human-readable diagnosis."""


class NonProjectiveError(InvalidInputError):
    """No strictly convex height function exists for the fan."""


class BudgetExceededError(InvalidInputError):
    """A step budget was exhausted before the loop converged."""


class EngineInvariantError(ToricMmpError):
    """An internal invariant failed; indicates a bug, not bad input."""
