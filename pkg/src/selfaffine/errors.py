"""Exception hierarchy shared across the package.

Everything derives from :class:`SelfAffineError` so callers (and the CLI,
which maps domain failures to exit code 1) can catch one base type.
"""


class SelfAffineError(Exception):
    """Base class for domain errors raised by this package."""


class DimensionMismatch(SelfAffineError):
    """Operands with incompatible ambient dimensions."""


class NotInvertible(SelfAffineError):
    """Matrix has zero determinant."""


class NotExpanding(SelfAffineError):
    """No power of the inverse matrix contracts; some eigenvalue is not outside the unit circle."""


class MissingZeroDigit(SelfAffineError):
    """Digit sets must contain the zero vector."""


class DuplicateDigit(SelfAffineError):
    """Two digits coincide (within the merge tolerance)."""


class BudgetExceeded(SelfAffineError):
    """Requested enumeration is larger than the configured mass cap."""


class NotACollision(SelfAffineError):
    """Witness construction was asked for a point with multiplicity one."""


class EmptyPointSet(SelfAffineError):
    """An operation requires at least one point."""


class UnsupportedDimension(SelfAffineError):
    """Exact window scans are implemented for dimensions 1 and 2 only."""


class SingularMatrix(SelfAffineError):
    """Rescaling matrix is not invertible."""


class InvalidCoefficient(SelfAffineError):
    """Coefficient outside the two admissible values for a Cantor pair."""


class ResolutionTooSmall(SelfAffineError):
    """Raster grids need at least 16 cells per axis."""


class NotATileCandidate(SelfAffineError):
    """Operation requires a tile-candidate pair with positive measure estimate."""


class NoTrustedLowerEntry(SelfAffineError):
    """Origin classification found no stabilized lower-density entry."""


class UnsupportedRegime(SelfAffineError):
    """Operation does not apply to this pair's regime."""


class ParseError(SelfAffineError):
    """Malformed pair-file text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
