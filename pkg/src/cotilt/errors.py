"""Exception types shared across the package."""


class CotiltError(Exception):
    """Base class for every error raised by this package."""


class InputError(CotiltError):
    """Malformed user input (files, expressions, command options)."""


class NonAdmissible(InputError):
    """A relation is not a combination of parallel paths of length at least 2."""


class InfiniteDimensional(InputError):
    """Path enumeration did not close below the configured length bound."""


class CharNotZero(CotiltError):
    """The requested operation needs a field of characteristic zero."""


class SplitFailure(CotiltError):
    """The semisimple quotient is not split over the ground field."""


class Inconclusive(CotiltError):
    """The isomorphism search exhausted its budget without a decision."""


class CapExceeded(CotiltError):
    """A resolution or replacement did not terminate within its length cap."""


class AcyclicityUnavailable(CotiltError):
    """Projectives are not Psi-Phi-acyclic, so the termwise derived route is invalid."""


class HypothesisViolated(CotiltError):
    """A theorem verifier was called outside the range of its hypotheses."""

    def __init__(self, message, witnesses=None):
        super().__init__(message)
        self.witnesses = witnesses or []


class NotDReflexive(CotiltError):
    """A map requiring an invertible derived unit was requested on a module without one."""


class UnknownExample(InputError):
    """No registry record carries the given identifier."""


class ExprSyntaxError(InputError):
    """Syntax error in a module expression, tagged with line and column."""

    def __init__(self, message, line=1, column=1):
        super().__init__("%d:%d: %s" % (line, column, message))
        self.line, self.column = line, column


class ExprSemanticError(InputError):
    """Well-formed expression that cannot be evaluated (e.g. vertex out of range)."""
