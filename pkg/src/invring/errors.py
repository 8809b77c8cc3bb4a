"""Exception types.  ``exit_code`` maps each failure onto the CLI contract."""


class InvringError(Exception):
    exit_code = 2


class InvalidInput(InvringError):
    exit_code = 2


class InvalidConductor(InvalidInput):
    pass


class IndexDivisible(InvringError):
    """The Dedekind criterion does not apply to this generator at this prime."""

    exit_code = 1


class NotInvertible(InvalidInput):
    pass


class BoundExceeded(InvringError):
    exit_code = 3


class DeskBoundExceeded(BoundExceeded):
    pass


class IndexNotInvertible(InvalidInput):
    pass


class NotHInvariant(InvalidInput):
    pass


class CharacteristicPositive(InvalidInput):
    pass


class OrderMismatch(InvalidInput):
    pass


class DegenerateParameters(InvringError):
    exit_code = 1


class TorsionRelationFound(InvringError):
    """Freeness over the parameter subring fails at ``degree``."""

    exit_code = 1

    def __init__(self, degree: int, kind: str, detail: str = ""):
        self.degree = degree
        self.kind = kind
        self.detail = detail
        super().__init__(f"{kind} found in degree {degree}" + (f": {detail}" if detail else ""))


class PreconditionFailed(InvalidInput):
    pass


class TraceNonzero(InvalidInput):
    pass


class EvenPrime(InvalidInput):
    pass


class PropertyViolated(InvringError):
    exit_code = 1
