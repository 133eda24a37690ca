"""Exception types shared across the package."""


class QpError(Exception):
    """Base class for all package-specific errors."""


class ContextMismatch(QpError):
    """Two operands carry different primes p."""


class NotCoprime(QpError):
    """Winding number k shares a factor with p."""


class ZeroWinding(QpError):
    """Winding number k = 0 is not an endomorphism parameter."""


class BadTarget(QpError):
    """expand_level target below the monomial's current level."""


class RangeError(QpError):
    """Generator index outside 0 <= j < p."""


class DimensionError(QpError):
    """Matrix dimension does not match p^h."""


class PreconditionError(QpError):
    """Operation precondition violated (h too small, exponent too large)."""


class NotInDomain(QpError):
    """Element outside the conditional expectation's domain."""


class NotInImage(QpError):
    """Element outside the image algebra; no preimage exists."""


class GridTooCoarse(QpError):
    """Circle grid cannot resolve the separation scale epsilon."""


class InsufficientData(QpError):
    """Too few usable points in the linear regime for a slope estimate."""


class ExprSyntaxError(QpError):
    """Expression parse failure; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NegativeSPower(ExprSyntaxError):
    """Negative powers of S (or of non-invertible subexpressions)."""


class InternalConsistencyError(QpError):
    """A closed-form index computation produced an out-of-range entry."""
