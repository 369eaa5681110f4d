"""Exception hierarchy shared by all modules."""


class QuatOrdersError(Exception):
    """Base class for every error raised by this package."""


class NonResidueError(QuatOrdersError, ValueError):
    pass


class UnsolvableSystemError(QuatOrdersError, ValueError):
    pass


class PrimeSearchError(QuatOrdersError, RuntimeError):
    pass


class RankError(QuatOrdersError, ValueError):
    pass


class NotAnOrderError(QuatOrdersError, ValueError):
    pass


class AdmissibilityError(QuatOrdersError, ValueError):
    pass


class InvalidDiscriminant(QuatOrdersError, ValueError):
    pass


class InvalidOverride(QuatOrdersError, ValueError):
    pass


class NotConstructible(QuatOrdersError):
    """The requested level cannot be reached in an algebra of this discriminant.

    ``certificate`` records the data proving impossibility: the 2-adic
    valuation of the level and the odd part of the product of primes
    dividing R*M1, which is 3 mod 4.
    """

    def __init__(self, message: str, certificate: dict):
        super().__init__(message)
        self.certificate = certificate


class InternalError(QuatOrdersError, RuntimeError):
    """A consistency check between two computations failed."""
