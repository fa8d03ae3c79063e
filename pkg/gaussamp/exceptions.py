"""
Exceptions raised by the gaussamp library.

Management commands and API views map these onto exit codes and HTTP
status codes, so every failure a caller can act on has its own class.
"""


class GaussAmpError(Exception):
    """Base class for all library errors."""


class InvalidInputError(GaussAmpError, ValueError):
    """Input is malformed or violates a documented precondition."""


class NonSymmetricMatrixError(InvalidInputError):
    pass


class NonUnitaryMatrixError(InvalidInputError):
    pass


class GaussianConstraintError(InvalidInputError):
    """(E, F) does not preserve the bosonic commutation relations."""


class SingularMatrixError(InvalidInputError):
    pass


class CapExceededError(GaussAmpError):
    """A configured size cap refused the request."""

    def __init__(self, what, value, cap):
        self.what = what
        self.value = value
        self.cap = cap
        super().__init__(f"{what} {value} exceeds the configured cap of {cap}")


class DecompositionError(GaussAmpError):
    pass


class PrefactorOverflowError(GaussAmpError):
    pass


class TruncationError(GaussAmpError):
    """Fock-space truncation discarded more norm than allowed."""

    def __init__(self, leakage, limit, cutoff):
        self.leakage = leakage
        self.limit = limit
        self.cutoff = cutoff
        super().__init__(
            f"Truncation leakage {leakage:.3e} at cutoff {cutoff} exceeds limit {limit:.1e}; "
            "raise the cutoff"
        )


class ConventionError(GaussAmpError):
    """A quantity that must be real came back with an imaginary part."""


class VerificationError(GaussAmpError):
    def __init__(self, value, reference, difference, tolerance):
        self.value = value
        self.reference = reference
        self.difference = difference
        self.tolerance = tolerance
        super().__init__(
            f"Pipeline value {value} and oracle value {reference} differ by "
            f"{difference:.3e} (tolerance {tolerance:.1e})"
        )
