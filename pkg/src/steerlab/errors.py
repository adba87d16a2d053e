"""Exception hierarchy shared by all steerlab modules.

Three failure classes are distinguished so that callers (and the CLI)
can map them to distinct exit codes: caller mistakes, physically
invalid inputs, and internal postcondition failures.
"""


class UsageError(ValueError):
    """Raised when an operation is called incorrectly (bad mode sets,
    out-of-range options, malformed configuration)."""


class DomainError(ValueError):
    """Raised when an input is well-formed but physically inadmissible,
    e.g. a matrix that is not a bona fide covariance matrix, a mixed
    state passed where purity is required, or local invariants violating
    the triangle condition."""


class InternalError(RuntimeError):
    """Raised when a constructor or solver fails its own postcondition.
    Indicates a convention bug, not a caller error."""
