"""Exception hierarchy shared by all bellreach modules."""


class BellreachError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(BellreachError):
    """Operands have incompatible lengths or shapes."""


class SingularMatrix(BellreachError):
    """A linear system has no unique solution."""


class EmptyInput(BellreachError):
    """An aggregate was requested over an empty collection."""


class InvalidMdp(BellreachError):
    """An MDP violates its structural invariants.

    ``violations`` holds the individual findings when they are known.
    """

    def __init__(self, message: str, violations: "list[str] | None" = None):
        super().__init__(message)
        self.violations = list(violations or [])


class UnknownAction(BellreachError):
    """An action id does not exist in the MDP."""


class OutOfUnitBox(BellreachError):
    """A vector lies outside the unit box [0, 1]^d."""


class NotAFixedPoint(BellreachError):
    """A vector claimed to be the fixed point fails the defining equation."""


class NonConvergence(BellreachError):
    """Internal guard: an exact computation failed to settle (indicates a bug)."""


class IterationCapExceeded(BellreachError):
    """A safety cap on exact iteration was hit (indicates a bug or bad input)."""


class RegimeViolation(BellreachError):
    """A sign vector contains a sign outside its regime's admitted range."""


class ZeroRow(BellreachError):
    """A zero row vector was passed where a non-zero one is required."""


class PreconditionViolated(BellreachError):
    """An operation-specific precondition does not hold."""


class InvalidInput(BellreachError):
    """A caller-supplied vector or bound is malformed."""


class ParseError(BellreachError):
    """A document or literal could not be parsed."""


class ValidationError(BellreachError):
    """A parsed document produced an MDP that fails validation.

    ``violations`` carries the findings of the structural check.
    """

    def __init__(self, message: str, violations: "list[str] | None" = None):
        super().__init__(message)
        self.violations = list(violations or [])
