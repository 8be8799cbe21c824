"""Shared exception types.

The distinction matters for the CLI exit-code contract: input problems,
failed mathematical checks, resource caps and internal consistency traps
are reported differently.
"""


class CarrierMismatch(ValueError):
    """Two values that must share a carrier do not."""


class ResourceCap(RuntimeError):
    """An exhaustive computation was requested above its configured cap."""


class PreconditionFailure(ValueError):
    """An operation was called on an instance violating its stated hypothesis.

    Carries the witness produced by the classifier so callers can report
    why the hypothesis fails.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InternalCheckFailure(RuntimeError):
    """A property that is provable from the construction failed anyway.

    This is a bug trap: it never indicates bad input, only a defect in
    this package.
    """


class DocumentError(ValueError):
    """An instance document failed to parse or violates referential integrity."""
