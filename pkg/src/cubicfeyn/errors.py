"""Exception hierarchy shared by the library and the CLI.

Each class carries the process exit code the CLI reports for it.
"""


class CubicFeynError(Exception):
    exit_code = 1


class ValidationError(CubicFeynError, ValueError):
    exit_code = 2


class ParseError(ValidationError):
    """Input could not be decoded (bad JSON, wrong top-level shape)."""


class InvariantError(ValidationError):
    """A decoded object violates a type invariant."""

    def __init__(self, field, invariant, detail=""):
        self.field = field
        self.invariant = invariant
        msg = f"{field}: violates '{invariant}'"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class DimensionError(ValidationError):
    pass


class DomainError(CubicFeynError, ArithmeticError):
    exit_code = 3


class DegenerateFormError(DomainError):
    pass


class BoundsError(CubicFeynError, ValueError):
    exit_code = 4
