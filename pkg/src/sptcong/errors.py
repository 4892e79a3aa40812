"""Exception hierarchy shared by all modules."""


class SeriesError(Exception):
    """Base class for every error raised by the package."""


class ZeroLeadingCoefficient(SeriesError):
    pass


class NonIntegralExponent(SeriesError):
    def __init__(self, index):
        super().__init__(f"exponent index {index} is not an integral q-power")
        self.index = index


class IndivisibleExponent(SeriesError):
    def __init__(self, exponent, t):
        super().__init__(f"q-exponent {exponent} is not divisible by {t}")
        self.exponent = exponent
        self.t = t


class DenominatorDivisibleByEll(SeriesError):
    def __init__(self, index, ell):
        super().__init__(f"coefficient at index {index} has denominator divisible by {ell}")
        self.index = index
        self.ell = ell


class InsufficientPrecision(SeriesError):
    """A computation needs more terms than are known.

    ``required`` is the source precision (in q-exponents) that would make
    the request satisfiable, when it can be computed.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class ZeroInput(SeriesError):
    pass


class HalfIntegralWeightUnsupported(SeriesError):
    pass


class OracleCeilingExceeded(SeriesError):
    pass


class PreconditionViolation(SeriesError):
    pass


class RecursionMismatch(SeriesError):
    pass


class DecompositionMismatch(SeriesError):
    def __init__(self, message, exponent=None):
        super().__init__(message)
        self.exponent = exponent


class IdentityFailure(SeriesError):
    def __init__(self, message, exponent=None):
        super().__init__(message)
        self.exponent = exponent


class SelfCheckFailure(SeriesError):
    pass


class GuardExceeded(SeriesError):
    pass


class CacheInconsistency(SeriesError):
    """A fresh build disagrees with a previously stored, shorter entry."""

    def __init__(self, key, index):
        super().__init__(f"cache entry {key!r} disagrees with a fresh build at index {index}")
        self.key = key
        self.index = index
