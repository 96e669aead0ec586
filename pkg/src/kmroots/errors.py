"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`KMRootsError`.
The ``exit_code`` attribute is what the command line reports for it.
"""


class KMRootsError(Exception):
    exit_code = 3


class InvalidInput(KMRootsError):
    exit_code = 2


class NotGCM(InvalidInput):
    DIAGONAL = "diagonal≠2"
    POSITIVE_OFF_DIAGONAL = "positive off-diagonal"
    ZERO_SYMMETRY = "zero-symmetry violated"
    NOT_SQUARE = "not a square integer matrix"

    def __init__(self, reason, where=None):
        self.reason = reason
        self.where = where
        msg = reason if where is None else f"{reason} at {where}"
        super().__init__(msg)


class NotSymmetrizable(InvalidInput):
    def __init__(self, cycle, lhs, rhs):
        self.cycle = tuple(cycle)
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(
            f"inconsistent cycle {list(self.cycle)}: "
            f"forward product {lhs} != backward product {rhs}"
        )


class MatrixTooLarge(InvalidInput):
    pass


class EmptySubset(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class ZeroVector(InvalidInput):
    pass


class NotPositive(InvalidInput):
    pass


class NotARoot(InvalidInput):
    def __init__(self, vector):
        self.vector = tuple(vector)
        super().__init__(f"{list(self.vector)} is not a root")


class NonPositive(InvalidInput):
    pass


class PreconditionViolated(InvalidInput):
    pass


class OracleBoundExceeded(InvalidInput):
    pass


class SearchBoundExceeded(KMRootsError):
    pass


class HeightBoundExceeded(KMRootsError):
    pass


class ZeroDenominator(KMRootsError):
    """The recurrence factor vanished while its right-hand side did not."""

    def __init__(self, beta, rhs):
        self.beta = tuple(beta)
        self.rhs = rhs
        super().__init__(
            f"zero recurrence factor at {list(self.beta)} with nonzero right-hand side {rhs}"
        )


class NonIntegerMultiplicity(KMRootsError):
    pass


class CorruptCache(KMRootsError):
    pass


class CertificateViolated(KMRootsError):
    pass
